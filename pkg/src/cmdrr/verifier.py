"""Validity checking for tournament candidates.

A schedule is a valid CMDRR(n, k) when:

* no spouse couple ever shares a game, as partners or opponents;
* every non-spouse man/woman pair partners exactly once and opposes
  exactly once;
* every player with a spouse opposes each same-sex player exactly once;
* every player without a spouse opposes exactly one other spouseless
  same-sex player twice and everyone else of that sex once, so the
  doubled oppositions pair up the n - k spouseless players of each sex;
* the game count is (n^2 - k) / 2, which also forces n - k to be even.

``verify`` reports every violation it finds rather than stopping at the
first, because the structured report doubles as the cost signal for
search and repair.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import (
    FEMALE,
    MALE,
    OppositionProfile,
    PlayerRef,
    Schedule,
    opposition_profile,
)
from .errors import InvalidParams


class Classification(Enum):
    STRICT_MMDRR = "StrictMMDRR"
    SAMDRR = "SAMDRR"
    GENERAL_CMDRR = "GeneralCMDRR"
    INVALID = "Invalid"


class ViolationKind(Enum):
    SPOUSE_TOGETHER = "SpouseTogether"
    PARTNER_COUNT_WRONG = "PartnerCountWrong"
    CROSS_OPPOSITION_WRONG = "CrossOppositionWrong"
    SAME_SEX_OPPOSITION_WRONG = "SameSexOppositionWrong"
    DOUBLE_STRUCTURE_WRONG = "DoubleStructureWrong"
    GAME_COUNT_WRONG = "GameCountWrong"
    PARITY_WRONG = "ParityWrong"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    subjects: tuple[PlayerRef, ...]
    observed: int
    required: str

    def __str__(self) -> str:
        who = ",".join(str(p) for p in self.subjects)
        return f"{self.kind.value}[{who}]: observed {self.observed}, required {self.required}"


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    classification: Classification
    violations: tuple[Violation, ...]
    repeat_oppositions: tuple[tuple[PlayerRef, PlayerRef], ...]

    def summary(self) -> str:
        if self.valid:
            reps = " ".join(f"{a}{b}" for a, b in self.repeat_oppositions)
            return f"valid {self.classification.value}" + (f" repeats: {reps}" if reps else "")
        return f"invalid ({len(self.violations)} violations)"


def _same_sex_violations(
    sex: str,
    n: int,
    opp,
    has_spouse,
    violations: list[Violation],
    repeats: list[tuple[PlayerRef, PlayerRef]],
) -> None:
    # Pair counts first, then the pairing structure of the doubles.
    doubled_partners = {i: [] for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            c = int(opp[i, j])
            if c == 2 and not has_spouse(i) and not has_spouse(j):
                repeats.append((PlayerRef(sex, i), PlayerRef(sex, j)))
                doubled_partners[i].append(j)
                doubled_partners[j].append(i)
            cap = 1 if (has_spouse(i) or has_spouse(j)) else 2
            if c < 1 or c > cap:
                violations.append(
                    Violation(
                        ViolationKind.SAME_SEX_OPPOSITION_WRONG,
                        (PlayerRef(sex, i), PlayerRef(sex, j)),
                        c,
                        f"between 1 and {cap}",
                    )
                )
    for i in range(1, n + 1):
        if has_spouse(i):
            continue
        d = len(doubled_partners[i])
        if d != 1:
            violations.append(
                Violation(
                    ViolationKind.DOUBLE_STRUCTURE_WRONG,
                    (PlayerRef(sex, i),),
                    d,
                    "exactly 1 doubled opposition partner",
                )
            )


def verify(s: Schedule) -> VerificationReport:
    """Check every validity clause of ``s`` and report all violations."""
    n, k = s.n, s.k
    prof: OppositionProfile = opposition_profile(s)
    violations: list[Violation] = []
    repeats: list[tuple[PlayerRef, PlayerRef]] = []

    if (n - k) % 2 != 0:
        violations.append(
            Violation(ViolationKind.PARITY_WRONG, (), n - k, "n - k must be even")
        )
    else:
        want = (n * n - k) // 2
        if len(s.games) != want:
            violations.append(
                Violation(ViolationKind.GAME_COUNT_WRONG, (), len(s.games), f"{want} games")
            )

    spouse_set = s.params.spouses
    for m, f in sorted(spouse_set):
        together = int(prof.cross_partner[m, f]) + int(prof.cross_opp[m, f])
        if together != 0:
            violations.append(
                Violation(
                    ViolationKind.SPOUSE_TOGETHER,
                    (PlayerRef(MALE, m), PlayerRef(FEMALE, f)),
                    together,
                    "spouses never share a game",
                )
            )

    for m in range(1, n + 1):
        for f in range(1, n + 1):
            if (m, f) in spouse_set:
                continue
            pc = int(prof.cross_partner[m, f])
            if pc != 1:
                violations.append(
                    Violation(
                        ViolationKind.PARTNER_COUNT_WRONG,
                        (PlayerRef(MALE, m), PlayerRef(FEMALE, f)),
                        pc,
                        "partners exactly once",
                    )
                )
            oc = int(prof.cross_opp[m, f])
            if oc != 1:
                violations.append(
                    Violation(
                        ViolationKind.CROSS_OPPOSITION_WRONG,
                        (PlayerRef(MALE, m), PlayerRef(FEMALE, f)),
                        oc,
                        "opposes exactly once",
                    )
                )

    _same_sex_violations(MALE, n, prof.male_opp, s.params.male_has_spouse, violations, repeats)
    _same_sex_violations(FEMALE, n, prof.female_opp, s.params.female_has_spouse, violations, repeats)

    valid = not violations
    if not valid:
        cls = Classification.INVALID
    elif k == 0:
        cls = Classification.STRICT_MMDRR
    elif k == n:
        cls = Classification.SAMDRR
    else:
        cls = Classification.GENERAL_CMDRR
    return VerificationReport(valid, cls, tuple(violations), tuple(repeats))


def classify(s: Schedule) -> Classification:
    return verify(s).classification


class ExistenceStatus(Enum):
    EXISTS = "Exists"
    KNOWN_NOT_EXIST = "KnownNotExist"
    OPEN_EXCEPTION = "OpenException"
    INVALID_PARAMS = "InvalidParams"


# The four parameter pairs with no tournament, and the 31 pairs still open.
KNOWN_NOT_EXIST_PAIRS = frozenset({(2, 2), (3, 3), (4, 2), (6, 6)})

OPEN_EXCEPTION_PAIRS = (
    (5, 3), (6, 2),
    (12, 2), (12, 6), (12, 8),
    (13, 3), (13, 7),
    (14, 2), (14, 6),
    (15, 3), (15, 7), (15, 9),
    (16, 2), (16, 10),
    (17, 3), (17, 7), (17, 11),
    (18, 2), (18, 10),
    (19, 3), (19, 11),
    (20, 2), (20, 14),
    (21, 3), (21, 11),
    (22, 2), (22, 14),
    (23, 15),
    (24, 2), (24, 14),
    (25, 15),
)

_OPEN_SET = frozenset(OPEN_EXCEPTION_PAIRS)


def existence_status(n: int, k: int) -> ExistenceStatus:
    """Existence of a CMDRR(n, k): settled table lookup, not a search."""
    if n < 1 or k < 0 or k > n or (n - k) % 2 != 0:
        return ExistenceStatus.INVALID_PARAMS
    if (n, k) in KNOWN_NOT_EXIST_PAIRS:
        return ExistenceStatus.KNOWN_NOT_EXIST
    if (n, k) in _OPEN_SET:
        return ExistenceStatus.OPEN_EXCEPTION
    return ExistenceStatus.EXISTS
