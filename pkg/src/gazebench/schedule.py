"""Condition matrix and per-participant trial ordering.

The study crosses 5 interface conditions (reticle filter modes) with 6
task conditions (2 kinds x 3 levels) into 30 unique combinations for the
within-subjects design.  Making the task kind between-subjects halves
that to 15 trials per participant.  Interface order is counterbalanced
with a Williams design: for 5 conditions that is 10 sequences (the base
square and its mirror), each first-order carryover balanced.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from .filters import CONDITION_MODES, FilterMode, mode_from_dict, mode_to_dict
from .tasks import Level, TaskKind


class Design(Enum):
    WITHIN = "within"
    BETWEEN_TASK = "between_task"


# Canonical task condition order: peg levels then thread levels.
TASK_CONDITIONS: Tuple[Tuple[TaskKind, Level], ...] = tuple(
    (kind, level) for kind in TaskKind for level in Level
)


@dataclass(frozen=True)
class Condition:
    mode: FilterMode
    task_kind: TaskKind
    level: Level

    def label(self) -> str:
        return f"{self.mode.describe()}/{self.task_kind.value}/{self.level.value}"

    def to_dict(self) -> dict:
        return {
            "mode": mode_to_dict(self.mode),
            "task_kind": self.task_kind.value,
            "level": self.level.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Condition":
        return cls(
            mode=mode_from_dict(d["mode"]),
            task_kind=TaskKind(d["task_kind"]),
            level=Level(d["level"]),
        )


def williams_rows(n: int) -> List[List[int]]:
    """Williams Latin square rows over range(n).

    Base row interleaves 0, 1, n-1, 2, n-2, ...; successive rows add 1
    mod n.  Odd n additionally needs each row's reverse for carryover
    balance, giving 2n sequences.
    """
    base = []
    lo, hi = 1, n - 1
    base.append(0)
    while len(base) < n:
        base.append(lo)
        lo += 1
        if len(base) < n:
            base.append(hi)
            hi -= 1
    rows = [[(x + i) % n for x in base] for i in range(n)]
    if n % 2 == 1:
        rows += [list(reversed(r)) for r in rows[:n]]
    return rows


def interface_order(participant_id: int) -> List[FilterMode]:
    rows = williams_rows(len(CONDITION_MODES))
    row = rows[participant_id % len(rows)]
    return [CONDITION_MODES[i] for i in row]


def assigned_task_kind(participant_id: int) -> TaskKind:
    """Between-subjects task assignment: alternate by participant id."""
    kinds = list(TaskKind)
    return kinds[participant_id % len(kinds)]


def condition_schedule(participant_id: int, design: Design) -> List[Condition]:
    """Ordered trial list for one participant.

    Within-subjects: all 30 combinations, task conditions nested inside
    the counterbalanced interface order.  Between-task: the participant's
    assigned kind only, 15 trials.
    """
    modes = interface_order(participant_id)
    schedule: List[Condition] = []
    if design is Design.WITHIN:
        tasks = TASK_CONDITIONS
    else:
        kind = assigned_task_kind(participant_id)
        tasks = tuple(tc for tc in TASK_CONDITIONS if tc[0] is kind)
    for mode in modes:
        for task_kind, level in tasks:
            schedule.append(Condition(mode, task_kind, level))
    return schedule
