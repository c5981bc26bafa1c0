import numpy as np

from ..exceptions import NetworkError


def check_grouping(net, grouping, group_pop=None):
    """Resolves a node grouping into (labels, codes, populations).

    grouping is either a mapping node_id -> group or a sequence with one group per node
    index. Returns the sorted group labels, the group code of every node and, when
    group_pop is given, the population of every group in label order.
    """
    if hasattr(grouping, 'get') and not isinstance(grouping, np.ndarray):
        missing = [v for v in net.node_ids if v not in grouping]

        if missing:
            raise NetworkError("node {!r} is not assigned to a group".format(missing[0]))

        assigned = np.array([str(grouping[v]) for v in net.node_ids])
    else:
        assigned = np.asarray(grouping).astype(str)

        if len(assigned) != net.n_nodes:
            raise NetworkError("grouping must have {} entries, got {}".format(net.n_nodes, len(assigned)))

        if np.any(assigned == '') or np.any(assigned == 'nan'):
            bad = int(np.flatnonzero((assigned == '') | (assigned == 'nan'))[0])
            raise NetworkError("node {!r} is not assigned to a group".format(net.node_ids[bad]))

    labels, codes = np.unique(assigned, return_inverse=True)

    if group_pop is None:
        return labels, codes, None

    group_pop = {str(k): v for k, v in dict(group_pop).items()}
    missing = [g for g in labels if g not in group_pop]

    if missing:
        raise ValueError("no population given for group {!r}".format(missing[0]))

    populations = np.array([float(group_pop[g]) for g in labels])

    if np.any(populations <= 0.0):
        raise ValueError("group populations must be > 0.0, got {}".format(populations.min()))

    return labels, codes, populations
