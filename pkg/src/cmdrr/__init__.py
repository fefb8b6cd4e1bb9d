"""Complete mixed doubles round robin tournaments.

Build, verify, resolve into rounds, and search for CMDRR(n, k) designs
and the latin-square structures (self-orthogonal, orthogonal pairs,
holey, holey with symmetric mate) that the constructions consume.
"""

from .core import (
    Game,
    Partnership,
    PlayerRef,
    Schedule,
    ScheduleMatrix,
    TournamentParams,
    canonicalize,
    expected_game_count,
    game,
    matrix_from_schedule,
    opposition_profile,
    params,
    schedule_from_matrix,
)
from .verifier import (
    Classification,
    ExistenceStatus,
    VerificationReport,
    Violation,
    ViolationKind,
    classify,
    existence_status,
    verify,
)
from .latin import (
    HoleStructure,
    HolyLatinSquare,
    Hsolssom,
    LatinSquare,
    MolsPair,
    SymmetricMate,
    cyclic_mols,
    cyclic_sols,
    hsols_from_sols,
    to_block_diagonal,
    verify_hsols,
    verify_hsolssom,
    verify_latin,
    verify_mols,
    verify_sols,
)
from .constructors import (
    cmdrr3n_from_hsolssom3,
    fill_hsols,
    product,
    resolvable_from_hsolssom2,
    samdrr_from_sols,
    unit_cmdrr,
)
from .resolver import (
    Resolution,
    ResolveResult,
    ResolveStatus,
    RoundAudit,
    resolve_full,
    resolve_short,
    verify_resolution,
)
from .search import (
    SearchOutcome,
    SearchStatus,
    TabuParams,
    exhaustive_search,
    tabu_find,
)
from . import catalog

__version__ = "0.1.0"
