"""Room lifecycle, admission policies, attendance, and session history."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mnegoti.errors import (
    AdmissionDeniedError,
    BusyError,
    ConfigurationError,
    InvalidTransitionError,
    RoomClosedError,
)
from mnegoti.model import Agent, AgentPhase, Issue
from mnegoti.protocols import ProtocolConfig, ProtocolKind, no_quorum_outcome, run_round, session_outcome
from mnegoti.rooms import (
    AdmissionKind,
    AdmissionPolicy,
    Agenda,
    MeetingRoom,
    RoomState,
)

ISSUES = {
    0: Issue(id=0, name="a", scores=(0.9, 0.1)),
    1: Issue(id=1, name="b", scores=(0.2, 0.8)),
    2: Issue(id=2, name="c", scores=(0.55, 0.55)),
}

PROTOCOL = ProtocolConfig(id="p", kind=ProtocolKind.MEDIATED_SINGLE_TEXT, max_rounds=4)


def conditions_agenda(issue_ids=(0, 1), groups=(), threshold=None, deadline=4):
    return Agenda(
        issue_ids=tuple(issue_ids),
        admission=AdmissionPolicy(
            kind=AdmissionKind.CONDITIONS, groups=tuple(groups), threshold=threshold
        ),
        protocol_id="p",
        deadline_rounds=deadline,
    )


def invitations_agenda(agents, issue_ids=(0, 1)):
    return Agenda(
        issue_ids=tuple(issue_ids),
        admission=AdmissionPolicy(kind=AdmissionKind.INVITATIONS, agents=tuple(agents)),
        protocol_id="p",
        deadline_rounds=4,
    )


def make_agent(ident, weights=(0.5, 0.5), group=0):
    return Agent(id=ident, group_id=group, raw_prefs=tuple(weights), weights=tuple(weights))


class TestLifecycle:
    def test_open_closed_room(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=3)
        assert room.room_state is RoomState.OPEN
        assert room.attendee_ids() == []
        assert room.opened_at == 3

    def test_open_twice_is_invalid(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=0)
        with pytest.raises(InvalidTransitionError):
            room.open(conditions_agenda(), tick=1)

    def test_close_closed_room_is_invalid(self):
        with pytest.raises(InvalidTransitionError):
            MeetingRoom(0).close(no_quorum_outcome([]), tick=0)

    def test_close_releases_attendees_and_appends_history(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=0)
        a, b = make_agent(1), make_agent(2)
        room.enter(a, 0, ISSUES)
        room.enter(b, 0, ISSUES)
        released = room.close(no_quorum_outcome([1, 2]), tick=2)
        assert released == [1, 2]
        assert a.phase is AgentPhase.IDLE and a.room_id is None
        assert room.room_state is RoomState.CLOSED
        assert len(room.history) == 1
        assert room.history[0].attendee_ids == (1, 2)
        assert room.history[0].opened_at == 0
        assert room.history[0].closed_at == 2

    def test_reopen_preserves_history(self):
        room = MeetingRoom(0)
        for opening in range(3):
            room.open(conditions_agenda(), tick=opening * 10)
            room.close(no_quorum_outcome([]), tick=opening * 10 + 1)
        assert len(room.history) == 3
        assert [r.opened_at for r in room.history] == [0, 10, 20]


class TestAdmission:
    def test_invitation_list_membership(self):
        room = MeetingRoom(0)
        room.open(invitations_agenda([3, 7]), tick=0)
        assert room.check_admission(make_agent(3), ISSUES) is True
        assert room.check_admission(make_agent(7), ISSUES) is True
        assert room.check_admission(make_agent(4), ISSUES) is False

    def test_zero_threshold_admits_every_group_eligible_agent(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(groups=(0,), threshold=0.0), tick=0)
        assert room.check_admission(make_agent(1, group=0), ISSUES) is True
        assert room.check_admission(make_agent(2, group=1), ISSUES) is False

    def test_interest_threshold_uses_max_agenda_utility(self):
        # Oracle: max of evaluate over the agenda; weights (0.5, 0.5) give
        # utilities 0.5 on both agenda issues, short of 0.6.
        agent = make_agent(1)
        room = MeetingRoom(0)
        room.open(conditions_agenda(issue_ids=(0, 1), threshold=0.6), tick=0)
        assert room.agenda_utility(agent, ISSUES) == pytest.approx(0.5)
        assert room.check_admission(agent, ISSUES) is False

        room2 = MeetingRoom(1)
        room2.open(conditions_agenda(issue_ids=(0, 1, 2), threshold=0.55), tick=0)
        assert room2.agenda_utility(agent, ISSUES) == pytest.approx(0.55)
        assert room2.check_admission(agent, ISSUES) is True

    def test_default_threshold_falls_back_to_scenario_theta(self):
        agent = make_agent(1)
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=0)
        assert room.check_admission(agent, ISSUES, default_threshold=0.9) is False
        assert room.check_admission(agent, ISSUES, default_threshold=0.3) is True

    def test_admission_on_closed_room_errors(self):
        with pytest.raises(RoomClosedError):
            MeetingRoom(0).check_admission(make_agent(1), ISSUES)


class TestEnter:
    def test_admitted_idle_agent_becomes_attendee(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=0)
        agent = make_agent(1)
        assert room.enter(agent, 0, ISSUES) is True
        assert room.attendee_ids() == [1]
        assert agent.phase is AgentPhase.IN_ROOM
        assert agent.room_id == 0

    def test_reentry_is_idempotent(self):
        room = MeetingRoom(0)
        room.open(conditions_agenda(), tick=0)
        agent = make_agent(1)
        room.enter(agent, 0, ISSUES)
        assert room.enter(agent, 0, ISSUES) is False
        assert room.attendee_ids() == [1]

    def test_agent_in_another_room_is_busy(self):
        first, second = MeetingRoom(0), MeetingRoom(1)
        first.open(conditions_agenda(), tick=0)
        second.open(conditions_agenda(), tick=0)
        agent = make_agent(1)
        first.enter(agent, 0, ISSUES)
        with pytest.raises(BusyError):
            second.enter(agent, 0, ISSUES)

    def test_unadmitted_agent_is_denied(self):
        room = MeetingRoom(0)
        room.open(invitations_agenda([9]), tick=0)
        with pytest.raises(AdmissionDeniedError):
            room.enter(make_agent(1), 0, ISSUES)


class TestStartSession:
    def open_with(self, *agents):
        room = MeetingRoom(0)
        room.open(conditions_agenda(deadline=3), tick=0)
        for agent in agents:
            room.enter(agent, 0, ISSUES)
        return room

    def test_two_attendees_start_a_session(self):
        first, second = make_agent(1), make_agent(2, weights=(0.9, 0.1))
        room = self.open_with(first, second)
        session = room.start_session(list(ISSUES.values()), PROTOCOL, {}, tick=1)
        assert room.room_state is RoomState.IN_SESSION
        assert session.participants == (1, 2)
        assert session.deadline_rounds == 3  # agenda wins over protocol default
        assert first.phase is AgentPhase.NEGOTIATING
        assert second.phase is AgentPhase.NEGOTIATING

    def test_single_attendee_cannot_start(self):
        room = self.open_with(make_agent(1))
        with pytest.raises(InvalidTransitionError):
            room.start_session(list(ISSUES.values()), PROTOCOL, {}, tick=1)

    def test_session_runs_to_recorded_outcome(self):
        room = self.open_with(make_agent(1, weights=(1.0, 0.0)), make_agent(2, weights=(0.0, 1.0)))
        session = room.start_session(list(ISSUES.values()), PROTOCOL, {}, tick=1)
        while session.status.value == "active":
            run_round(session)
        outcome = session_outcome(session)
        room.close(outcome, tick=2)
        assert len(room.history) == 1
        assert room.history[0].outcome is outcome


class TestAgendaValidation:
    def test_empty_issue_list_rejected(self):
        with pytest.raises(ConfigurationError):
            Agenda(
                issue_ids=(),
                admission=AdmissionPolicy(kind=AdmissionKind.CONDITIONS),
                protocol_id="p",
                deadline_rounds=1,
            )

    def test_zero_deadline_rejected(self):
        with pytest.raises(ConfigurationError):
            conditions_agenda(deadline=0)

    def test_empty_invitation_list_rejected(self):
        with pytest.raises(ConfigurationError):
            AdmissionPolicy(kind=AdmissionKind.INVITATIONS, agents=())

    def test_threshold_outside_unit_interval_rejected(self):
        with pytest.raises(ConfigurationError):
            AdmissionPolicy(kind=AdmissionKind.CONDITIONS, threshold=1.5)


class TestStateMachineProperty:
    """Random op sequences only ever reach legal states via legal transitions."""

    LEGAL = {
        (RoomState.CLOSED, RoomState.OPEN),
        (RoomState.OPEN, RoomState.IN_SESSION),
        (RoomState.OPEN, RoomState.CLOSED),
        (RoomState.IN_SESSION, RoomState.CLOSED),
    }

    @given(
        ops=st.lists(
            st.sampled_from(["open", "enter", "start", "close"]), min_size=1, max_size=40
        )
    )
    @settings(max_examples=200)
    def test_random_sequences(self, ops):
        room = MeetingRoom(0)
        agents = [make_agent(i, weights=(0.6, 0.4)) for i in range(1, 4)]
        transitions = []
        for op in ops:
            before = room.room_state
            try:
                if op == "open":
                    room.open(conditions_agenda(), tick=0)
                elif op == "enter":
                    for agent in agents:
                        if agent.room_id is None and room.room_state is RoomState.OPEN:
                            room.enter(agent, 0, ISSUES)
                elif op == "start":
                    room.start_session(list(ISSUES.values()), PROTOCOL, {}, tick=0)
                else:
                    room.close(no_quorum_outcome(room.attendee_ids()), tick=0)
            except (InvalidTransitionError, RoomClosedError):
                assert room.room_state is before
                continue
            if room.room_state is not before:
                transitions.append((before, room.room_state))
        assert all(t in self.LEGAL for t in transitions)
        # Attendees are confined to the one room they entered.
        for agent in agents:
            assert agent.room_id in (None, 0)
