"""Trust-region and evolutionary minimization; interior-point linear programming."""

from ._trustregion import (
    CallbackError,
    MinimizeResult,
    Objective,
    TrustRegionState,
    minimize_trust_region,
    solve_subproblem_dogleg,
    solve_subproblem_exact,
    solve_subproblem_steihaug,
)
from ._de import DeConfig, differential_evolution
from ._linprog import (
    Certificate,
    LpProblem,
    LpResult,
    PresolveResult,
    dump_problem,
    linprog,
    linprog_interior_point,
    load_problem,
    lp_presolve,
)
