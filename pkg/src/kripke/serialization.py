"""JSON import and export of models and relational frames."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional

from src.kripke.frame import ChainFrame, Cluster, ClusterFrame
from src.kripke.model import Model, Valuation
from src.kripke.wellformed import RelationalFrame
from src.utils.errors import FrameError

logger = logging.getLogger(__name__)


class LoadedModel(NamedTuple):
    model: Model
    cluster_tags: List[Dict[str, Any]]
    sp: Optional[Dict[str, Any]]


def _is_plain_chain(frame: ClusterFrame) -> bool:
    count = len(frame.clusters)
    return frame.successors == tuple(i + 1 if i + 1 < count else None for i in range(count))


def model_to_dict(model: Model, cluster_tags: Optional[List[Dict[str, Any]]] = None,
                  sp: Optional[Dict[str, Any]] = None, var_prefix: str = 'p') -> Dict[str, Any]:
    """
    Serialize a model. `next` entries are written only for frames that are not plain chains.

    Args:
        model: The model to write.
        cluster_tags: Extra per-cluster fields (for example slice layers).
        sp: Optional SP structure written under the `sp` key.
        var_prefix: Prefix of valuation keys.
    """
    frame = model.frame
    chain = _is_plain_chain(frame)
    clusters = []
    for index, cluster in enumerate(frame.clusters):
        entry: Dict[str, Any] = {
            'worlds': list(cluster.worlds),
            'partitions': [[list(block) for block in partition] for partition in cluster.partitions],
        }
        if not chain:
            entry['next'] = frame.successors[index]
        if cluster_tags:
            entry.update(cluster_tags[index])
        clusters.append(entry)
    data: Dict[str, Any] = {
        'agents': frame.agents,
        'clusters': clusters,
        'valuation': {f"{var_prefix}{i}": sorted(ws) for i, ws in model.valuation.assignments},
    }
    if sp is not None:
        data['sp'] = sp
    return data


def _variable_index(key: str) -> int:
    if len(key) < 2 or key[0] not in 'px' or not key[1:].isdigit():
        raise FrameError(f"Invalid valuation key {key!r}")
    return int(key[1:])


def model_from_dict(data: Dict[str, Any]) -> LoadedModel:
    try:
        agents = int(data['agents'])
        raw_clusters = data['clusters']
        clusters = [Cluster(tuple(c['worlds']), tuple(tuple(tuple(b) for b in p) for p in c['partitions']))
                    for c in raw_clusters]
    except (KeyError, TypeError) as e:
        raise FrameError(f"Malformed model JSON: {e}") from e
    if any('next' in c for c in raw_clusters):
        frame = ClusterFrame(tuple(clusters), tuple(c.get('next') for c in raw_clusters), agents)
    else:
        frame = ChainFrame.of(clusters, agents)
    valuation = Valuation.of({_variable_index(k): v for k, v in data.get('valuation', {}).items()})
    tags = [{k: v for k, v in c.items() if k not in ('worlds', 'partitions', 'next')} for c in raw_clusters]
    return LoadedModel(Model(frame, valuation), tags, data.get('sp'))


def dump_model(path: str | Path, model: Model, **kwargs) -> None:
    with open(path, 'w') as f:
        json.dump(model_to_dict(model, **kwargs), f, indent=2, sort_keys=True)
    logger.info(f"Wrote model with {model.frame.size} worlds to {path}")


def load_model(path: str | Path) -> LoadedModel:
    with open(path, 'r') as f:
        return model_from_dict(json.load(f))


def load_relational_frame(data: Dict[str, Any]) -> RelationalFrame:
    """
    Read an explicit relational frame:
    `{worlds: [...], rt: [[w, z], ...], re: [...], agents: [[pairs] per agent], clusters?: [[ids]]}`.
    """
    try:
        worlds = tuple(data['worlds'])
        clusters = data.get('clusters')
        return RelationalFrame(
            worlds=worlds,
            rt=frozenset(tuple(p) for p in data['rt']),
            re=frozenset(tuple(p) for p in data['re']),
            agent_relations=tuple(frozenset(tuple(p) for p in rel) for rel in data.get('agents', [])),
            clusters=tuple(frozenset(c) for c in clusters) if clusters is not None else None,
        )
    except (KeyError, TypeError) as e:
        raise FrameError(f"Malformed relational frame JSON: {e}") from e
