"""Half-duplex relay scheduling: cut-set bounds, schedule optimization, experiments.

Networks are ``Network`` objects; schedules, results and reports are plain
dicts in the same JSON layout the command line tool reads and writes.
"""

from ._core import (
    HdrelayError,
    Network,
    __version__,
    bench_duty,
    bench_ratio,
    bench_timing,
    compare,
    cut_value,
    full_duplex_bound,
    gen_layered,
    gen_line_two_hop,
    gen_random,
    group,
    hd_fd_ratio,
    min_cut,
    naive_schedule,
    reconstruct_joint,
    simple_random_schedule,
    solve,
    solve_lindet,
)

__all__ = [
    "HdrelayError",
    "Network",
    "__version__",
    "bench_duty",
    "bench_ratio",
    "bench_timing",
    "compare",
    "cut_value",
    "full_duplex_bound",
    "gen_layered",
    "gen_line_two_hop",
    "gen_random",
    "group",
    "hd_fd_ratio",
    "min_cut",
    "naive_schedule",
    "reconstruct_joint",
    "simple_random_schedule",
    "solve",
    "solve_lindet",
]
