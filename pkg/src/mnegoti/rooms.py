"""Meeting room lifecycle: open, admission, attendance, sessions, history.

A room cycles Closed -> Open -> InSession -> Closed (or Open -> Closed when
no session starts). Attendees live in a per-room sub-context with set
semantics, and every completed opening appends an immutable SessionRecord,
so history survives reopening.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .context import Context, ObjectKind
from .errors import (
    AdmissionDeniedError,
    BusyError,
    ConfigurationError,
    InvalidTransitionError,
    RoomClosedError,
)
from .model import Agent, AgentPhase, Issue, StrategyConfig, evaluate
from .protocols import (
    NegotiationOutcome,
    NegotiationSession,
    ProtocolConfig,
    build_session,
)


class RoomState(str, Enum):
    CLOSED = "closed"
    OPEN = "open"
    IN_SESSION = "in_session"


class AdmissionKind(str, Enum):
    CONDITIONS = "conditions"
    INVITATIONS = "invitations"


@dataclass(frozen=True)
class AdmissionPolicy:
    """Either group/interest conditions or an explicit invitation list.

    In conditions mode ``groups`` empty means any group, and ``threshold``
    None falls back to the scenario-wide interest threshold.
    """

    kind: AdmissionKind
    groups: tuple[int, ...] = ()
    threshold: float | None = None
    agents: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind is AdmissionKind.INVITATIONS and not self.agents:
            raise ConfigurationError("invitation admission needs a non-empty agent list")
        if self.threshold is not None and not 0.0 <= self.threshold <= 1.0:
            raise ConfigurationError(f"admission threshold {self.threshold} outside [0, 1]")


@dataclass(frozen=True)
class Agenda:
    """What one room opening is about and who may take part."""

    issue_ids: tuple[int, ...]
    admission: AdmissionPolicy
    protocol_id: str
    deadline_rounds: int

    def __post_init__(self) -> None:
        if not self.issue_ids:
            raise ConfigurationError("agenda needs at least one issue")
        if self.deadline_rounds < 1:
            raise ConfigurationError("agenda deadline_rounds must be >= 1")


@dataclass(frozen=True)
class SessionRecord:
    opened_at: int
    closed_at: int
    agenda: Agenda
    attendee_ids: tuple[int, ...]
    outcome: NegotiationOutcome


class MeetingRoom:
    """One negotiation venue; can be opened many times."""

    def __init__(self, room_id: int) -> None:
        self.id = room_id
        self.room_state = RoomState.CLOSED
        self.agenda: Agenda | None = None
        self.attendees = Context()
        self.history: list[SessionRecord] = []
        self.session: NegotiationSession | None = None
        self.opened_at: int | None = None

    @property
    def state(self) -> str:
        return self.room_state.value

    def attendee_ids(self) -> list[int]:
        return sorted(ident for _, ident, _ in self.attendees.items())

    def open(self, agenda: Agenda, tick: int) -> None:
        if self.room_state is not RoomState.CLOSED:
            raise InvalidTransitionError(
                f"room {self.id} is {self.room_state.value}, cannot open"
            )
        self.agenda = agenda
        self.room_state = RoomState.OPEN
        self.opened_at = tick

    def agenda_utility(self, agent: Agent, issues_by_id: Mapping[int, Issue]) -> float:
        """The agent's best utility over the current agenda."""
        if self.agenda is None:
            raise RoomClosedError(f"room {self.id} has no agenda")
        return max(evaluate(agent, issues_by_id[i]) for i in self.agenda.issue_ids)

    def check_admission(
        self,
        agent: Agent,
        issues_by_id: Mapping[int, Issue],
        default_threshold: float = 0.0,
    ) -> bool:
        if self.room_state is not RoomState.OPEN:
            raise RoomClosedError(f"room {self.id} is not open")
        policy = self.agenda.admission
        if policy.kind is AdmissionKind.INVITATIONS:
            return agent.id in policy.agents
        if policy.groups and agent.group_id not in policy.groups:
            return False
        threshold = (
            policy.threshold if policy.threshold is not None else default_threshold
        )
        return self.agenda_utility(agent, issues_by_id) >= threshold

    def enter(
        self,
        agent: Agent,
        tick: int,
        issues_by_id: Mapping[int, Issue],
        default_threshold: float = 0.0,
    ) -> bool:
        """Admit the agent; returns False on idempotent re-entry."""
        if self.room_state is not RoomState.OPEN:
            raise RoomClosedError(f"room {self.id} is not open")
        if agent.room_id == self.id:
            return False
        if agent.phase not in (AgentPhase.IDLE, AgentPhase.WATCHING):
            raise BusyError(f"agent {agent.id} is already in room {agent.room_id}")
        if not self.check_admission(agent, issues_by_id, default_threshold):
            raise AdmissionDeniedError(f"agent {agent.id} not admitted to room {self.id}")
        self.attendees.add(ObjectKind.AGENT, agent.id, agent)
        agent.phase = AgentPhase.IN_ROOM
        agent.room_id = self.id
        return True

    def start_session(
        self,
        issues: Sequence[Issue],
        protocol: ProtocolConfig,
        strategies: Mapping[int, StrategyConfig],
        tick: int,
    ) -> NegotiationSession:
        if self.room_state is not RoomState.OPEN:
            raise InvalidTransitionError(
                f"room {self.id} is {self.room_state.value}, cannot start a session"
            )
        attendees = [obj for _, _, obj in self.attendees.items()]
        if len(attendees) < 2:
            raise InvalidTransitionError(
                f"room {self.id} needs at least 2 attendees, has {len(attendees)}"
            )
        agenda_issues = [i for i in issues if i.id in self.agenda.issue_ids]
        session = build_session(
            room_id=self.id,
            agents=attendees,
            issues=agenda_issues,
            protocol=protocol,
            strategies=strategies,
            deadline_rounds=self.agenda.deadline_rounds,
            started_tick=tick,
        )
        self.session = session
        self.room_state = RoomState.IN_SESSION
        for attendee in attendees:
            attendee.phase = AgentPhase.NEGOTIATING
        return session

    def close(self, outcome: NegotiationOutcome, tick: int) -> list[int]:
        """Record the session, release attendees to Idle, return their ids."""
        if self.room_state is RoomState.CLOSED:
            raise InvalidTransitionError(f"room {self.id} is already closed")
        attendee_ids = tuple(self.attendee_ids())
        self.history.append(
            SessionRecord(
                opened_at=self.opened_at if self.opened_at is not None else tick,
                closed_at=tick,
                agenda=self.agenda,
                attendee_ids=attendee_ids,
                outcome=outcome,
            )
        )
        released = []
        for ident in attendee_ids:
            agent = self.attendees.get(ObjectKind.AGENT, ident)
            agent.phase = AgentPhase.IDLE
            agent.room_id = None
            released.append(ident)
        self.attendees = Context()
        self.agenda = None
        self.session = None
        self.opened_at = None
        self.room_state = RoomState.CLOSED
        return released
