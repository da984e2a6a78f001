"""Sign vectors over the atoms x_i, <T>x_i, <E>x_i, <A_l>x_i and sets of them.

Atom z of variable i sits at position i * (3 + k) + z with z = 0 for the
literal, 1 for <T>, 2 for <E> and 2 + l for <A_l>. Sign 0 means the atom occurs
positively, sign 1 negated.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from src.syntax.formula import Formula, Not, Var, conjunction, diamond_agent, diamond_e, diamond_t

logger = logging.getLogger(__name__)

LIT, DIAMOND_T, DIAMOND_E = 0, 1, 2

Atom = Tuple[int, int]
PatternKey = Tuple[int, int]


def atom_width(agents: int) -> int:
    return 3 + agents


def atom_position(i: int, z: int, agents: int) -> int:
    return i * atom_width(agents) + z


def atom_formula(i: int, z: int) -> Formula:
    x = Var(i)
    if z == LIT:
        return x
    if z == DIAMOND_T:
        return diamond_t(x)
    if z == DIAMOND_E:
        return diamond_e(x)
    return diamond_agent(z - 2, x)


def atom_label(i: int, z: int) -> str:
    if z == LIT:
        return f"x{i}"
    if z == DIAMOND_T:
        return f"<T>x{i}"
    if z == DIAMOND_E:
        return f"<E>x{i}"
    return f"<A{z - 2}>x{i}"


def atom_mask(z: int, dt: int, de: int, dag: Sequence[int]) -> int:
    if z == DIAMOND_T:
        return dt
    if z == DIAMOND_E:
        return de
    return dag[z - 3]


@dataclass(frozen=True, order=True)
class Theta:
    signs: Tuple[int, ...]
    var_count: int = field(compare=False)
    agents: int = field(compare=False)

    @classmethod
    def from_truths(cls, var_count: int, agents: int, lits: int, dt: int, de: int,
                    dag: Sequence[int]) -> 'Theta':
        """Build the theta whose atoms have the given truth masks (bit i is variable i)."""
        signs = []
        for i in range(var_count):
            signs.append(0 if lits >> i & 1 else 1)
            for z in range(1, atom_width(agents)):
                signs.append(0 if atom_mask(z, dt, de, dag) >> i & 1 else 1)
        return cls(tuple(signs), var_count, agents)

    def sign(self, i: int, z: int) -> int:
        return self.signs[atom_position(i, z, self.agents)]

    def truth_mask(self, z: int) -> int:
        mask = 0
        for i in range(self.var_count):
            if self.sign(i, z) == 0:
                mask |= 1 << i
        return mask

    @property
    def lits(self) -> int:
        return self.truth_mask(LIT)

    def to_formula(self) -> Formula:
        width = atom_width(self.agents)
        atoms = []
        for pos, sign in enumerate(self.signs):
            atom = atom_formula(pos // width, pos % width)
            atoms.append(atom if sign == 0 else Not(atom))
        return conjunction(atoms)

    def describe(self) -> str:
        width = atom_width(self.agents)
        return " ".join(("+" if sign == 0 else "-") + atom_label(pos // width, pos % width)
                        for pos, sign in enumerate(self.signs))


class ThetaSet:
    """
    The set of thetas whose literal part and constrained atoms form one of `patterns`.

    Atoms not listed in `constrained` are free: every sign combination of them is a
    member. A pattern key is (literal truth mask, bit t = truth of constrained[t]).
    Members are ordered lexicographically by sign vector; `index` and `[]` rank and
    unrank in that order without listing the set.
    """

    def __init__(self, var_count: int, agents: int, constrained: Iterable[Atom],
                 patterns: Iterable[PatternKey]):
        self.var_count = var_count
        self.agents = agents
        self.constrained: Tuple[Atom, ...] = tuple(sorted(set(constrained),
                                                         key=lambda a: atom_position(a[0], a[1], agents)))
        self.patterns: FrozenSet[PatternKey] = frozenset(patterns)
        width = atom_width(agents)
        self.positions = var_count * width
        self._constrained_positions: Dict[int, int] = {}
        for i in range(var_count):
            self._constrained_positions[atom_position(i, LIT, agents)] = -1 - i
        for t, (i, z) in enumerate(self.constrained):
            self._constrained_positions[atom_position(i, z, agents)] = t
        self.free_count = self.positions - len(self._constrained_positions)
        free_after = []
        remaining = self.free_count
        for pos in range(self.positions):
            if pos not in self._constrained_positions:
                remaining -= 1
            free_after.append(remaining)
        self._free_after = tuple(free_after)
        self._pattern_signs: List[Dict[int, int]] = sorted(
            (self._signs_of(key) for key in self.patterns),
            key=lambda signs: tuple(signs[pos] for pos in sorted(signs)))

    def _signs_of(self, key: PatternKey) -> Dict[int, int]:
        lits, bits = key
        signs = {}
        for pos, slot in self._constrained_positions.items():
            truth = (lits >> (-1 - slot) & 1) if slot < 0 else (bits >> slot & 1)
            signs[pos] = 1 - truth
        return signs

    @classmethod
    def from_thetas(cls, var_count: int, agents: int, thetas: Iterable[Theta]) -> 'ThetaSet':
        """An explicit set: every atom is constrained."""
        constrained = [(i, z) for i in range(var_count) for z in range(1, atom_width(agents))]
        probe = cls(var_count, agents, constrained, ())
        return cls(var_count, agents, constrained, (probe.key_of_theta(t) for t in thetas))

    @property
    def count(self) -> int:
        return len(self.patterns) << self.free_count

    def __len__(self) -> int:
        return self.count

    def __bool__(self) -> bool:
        return bool(self.patterns)

    def key_of(self, lits: int, dt: int, de: int, dag: Sequence[int]) -> PatternKey:
        bits = 0
        for t, (i, z) in enumerate(self.constrained):
            if atom_mask(z, dt, de, dag) >> i & 1:
                bits |= 1 << t
        return lits, bits

    def key_of_theta(self, theta: Theta) -> PatternKey:
        bits = 0
        for t, (i, z) in enumerate(self.constrained):
            if theta.sign(i, z) == 0:
                bits |= 1 << t
        return theta.lits, bits

    def accepts(self, lits: int, dt: int, de: int, dag: Sequence[int]) -> bool:
        return self.key_of(lits, dt, de, dag) in self.patterns

    def theta_of(self, lits: int, dt: int, de: int, dag: Sequence[int]) -> Theta:
        return Theta.from_truths(self.var_count, self.agents, lits, dt, de, dag)

    def __contains__(self, theta: Theta) -> bool:
        return (theta.var_count == self.var_count and theta.agents == self.agents
                and self.key_of_theta(theta) in self.patterns)

    def _count_with(self, candidates: List[Dict[int, int]], pos: int, sign: int) -> Tuple[int, List[Dict[int, int]]]:
        if pos in self._constrained_positions:
            kept = [c for c in candidates if c[pos] == sign]
        else:
            kept = candidates
        return len(kept) << self._free_after[pos], kept

    def index(self, theta: Theta) -> int:
        """Rank of `theta` among the members in sign order."""
        if theta not in self:
            raise ValueError(f"Theta {theta.describe()} is not in the set")
        rank = 0
        candidates = self._pattern_signs
        for pos, sign in enumerate(theta.signs):
            if sign == 1:
                below, _ = self._count_with(candidates, pos, 0)
                rank += below
            _, candidates = self._count_with(candidates, pos, sign)
        return rank

    def __getitem__(self, rank: int) -> Theta:
        if not 0 <= rank < self.count:
            raise IndexError(f"Theta index {rank} out of range 0..{self.count - 1}")
        candidates = self._pattern_signs
        signs = []
        for pos in range(self.positions):
            below, kept = self._count_with(candidates, pos, 0)
            if rank < below:
                signs.append(0)
                candidates = kept
            else:
                rank -= below
                signs.append(1)
                _, candidates = self._count_with(candidates, pos, 1)
        return Theta(tuple(signs), self.var_count, self.agents)

    def __iter__(self) -> Iterator[Theta]:
        for rank in range(self.count):
            yield self[rank]

    def lit_vectors(self) -> Tuple[int, ...]:
        return tuple(sorted({lits for lits, _ in self.patterns}))
