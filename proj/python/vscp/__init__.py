"""Bounded-preemption sequential consistency checking.

Parse multi-threaded read/write traces, classify their writer structure,
and decide whether they admit a sequentially consistent interleaving with
a bounded number of preemptions. Includes the polynomial 1-Writer solver,
an exact memoized search, a brute-force enumeration oracle, and generators
for the SAT and independent-set hardness families.
"""

from ._core import (
    Program,
    TraceParseError,
    classify_writers,
    count_preemptions,
    enumerate_all,
    indepset_bruteforce,
    indepset_to_program,
    is_sequentially_consistent,
    parse_dimacs,
    parse_edge_list,
    parse_program,
    sat3_to_2writer,
    sat3_to_3writer,
    sat_bruteforce,
    serialize_program,
    solve_exact,
    solve_one_writer,
    validate_interleaving,
)
from ._core import __version__

__all__ = [
    "Program",
    "TraceParseError",
    "classify_writers",
    "count_preemptions",
    "enumerate_all",
    "indepset_bruteforce",
    "indepset_to_program",
    "is_sequentially_consistent",
    "parse_dimacs",
    "parse_edge_list",
    "parse_program",
    "sat3_to_2writer",
    "sat3_to_3writer",
    "sat_bruteforce",
    "serialize_program",
    "solve_exact",
    "solve_one_writer",
    "validate_interleaving",
    "__version__",
]
