"""Threaded session hosting for live clients.

One worker thread owns each session: commands (start/pause/attack/reset)
are serialized through an ordered queue, and telemetry observers read the
session's append-only log at their own pace, so observers can never
mutate simulation state. Pacing defaults to real time so a human can
steer attacks against the live run; pace=0 free-runs.
"""
from __future__ import annotations

import queue
import threading
import time
from dataclasses import dataclass
from typing import Any, Iterator, Optional

from .attack import AttackConfig
from .config import ScenarioConfig
from .session import Session, SessionState

TICK_CHUNK = 64           # ticks simulated per command-queue poll
DEFAULT_DECIMATION = 20   # every Nth tick on the telemetry stream
MAX_BACKLOG_FRAMES = 2000  # slow subscribers drop oldest beyond this


@dataclass
class _Command:
    name: str
    payload: Any = None
    reply: "queue.Queue[tuple[bool, Any]]" = None  # type: ignore[assignment]


class SessionHost:
    """Wraps a Session with a worker thread and a command queue."""

    def __init__(self, session: Session):
        self._session = session
        self._commands: "queue.Queue[_Command]" = queue.Queue()
        self._wakeup = threading.Condition()
        self._running_requested = False
        self._pace = 1.0
        self._generation = 0
        self._closed = False
        self._pace_anchor: Optional[tuple[float, float]] = None
        self._worker = threading.Thread(target=self._loop, daemon=True,
                                        name=f"session-{session.id}")
        self._worker.start()

    # -- public surface (thread-safe) ---------------------------------------

    @property
    def session(self) -> Session:
        return self._session

    @property
    def generation(self) -> int:
        return self._generation

    def view(self) -> dict[str, Any]:
        """Immutable snapshot of the session for API listings."""
        s = self._session
        attack = s.active_attack
        return {
            "id": s.id,
            "state": s.state.value,
            "sim_time": s.sim_time,
            "tick_count": s.tick_count,
            "config_digest": s.config.digest(),
            "faulted_tick": s.log.faulted_tick,
            "active_attack": None if attack is None else {
                "attacker_type": attack.attacker_type,
                "carrier_freq": attack.carrier_freq,
                "spl_at_source": attack.spl_at_source,
                "start_t": attack.start_t,
            },
        }

    def start(self, pace: float = 1.0) -> dict[str, Any]:
        return self._submit("start", pace)

    def pause(self) -> dict[str, Any]:
        return self._submit("pause")

    def apply_attack(self, cfg: AttackConfig) -> dict[str, Any]:
        return self._submit("attack", cfg)

    def reset(self) -> dict[str, Any]:
        return self._submit("reset")

    def shutdown(self) -> None:
        if self._closed:
            return
        self._submit("shutdown")
        self._worker.join(timeout=5.0)

    def wait_for(self, *states: SessionState, timeout: float = 60.0) -> SessionState:
        """Block until the session reaches one of the given states."""
        deadline = time.monotonic() + timeout
        with self._wakeup:
            while self._session.state not in states:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise TimeoutError(
                        f"session stuck in {self._session.state.value}")
                self._wakeup.wait(min(remaining, 0.25))
            return self._session.state

    def _submit(self, name: str, payload: Any = None) -> Any:
        if self._closed:
            raise RuntimeError("host is shut down")
        reply: "queue.Queue[tuple[bool, Any]]" = queue.Queue(maxsize=1)
        self._commands.put(_Command(name, payload, reply))
        with self._wakeup:
            self._wakeup.notify_all()
        ok, result = reply.get(timeout=30.0)
        if not ok:
            raise result
        return result

    # -- worker -------------------------------------------------------------

    def _loop(self) -> None:
        while not self._closed:
            if self._running_requested:
                try:
                    command = self._commands.get_nowait()
                except queue.Empty:
                    command = None
            else:
                command = self._commands.get()
            if command is not None:
                self._handle(command)
                continue
            if self._running_requested:
                self._advance_chunk()

    def _handle(self, command: _Command) -> None:
        try:
            result: Any = None
            if command.name == "start":
                if self._session.state in (SessionState.COMPLETED,
                                           SessionState.FAULTED):
                    raise IllegalTransition(
                        f"cannot start a {self._session.state.value} session")
                self._pace = float(command.payload)
                self._running_requested = True
                self._pace_anchor = None
                result = {"state": "running"}
            elif command.name == "pause":
                if self._session.state not in (SessionState.RUNNING,
                                               SessionState.PAUSED):
                    raise IllegalTransition(
                        f"cannot pause a {self._session.state.value} session")
                self._running_requested = False
                if self._session.state == SessionState.RUNNING:
                    self._session.state = SessionState.PAUSED
                result = {"state": self._session.state.value}
            elif command.name == "attack":
                cfg = self._session.apply_attack(command.payload)
                result = {"applied": True, "start_t": cfg.start_t}
            elif command.name == "reset":
                self._running_requested = False
                self._session = Session(self._session.id, self._session.config)
                self._generation += 1
                result = {"state": "created"}
            elif command.name == "shutdown":
                self._running_requested = False
                self._closed = True
                result = {"state": "closed"}
            else:
                raise ValueError(f"unknown command {command.name}")
            command.reply.put((True, result))
        except Exception as exc:  # surfaced synchronously to the caller
            command.reply.put((False, exc))
        finally:
            with self._wakeup:
                self._wakeup.notify_all()

    def _advance_chunk(self) -> None:
        session = self._session
        state = session.step_chunk(TICK_CHUNK)
        if state in (SessionState.COMPLETED, SessionState.FAULTED):
            self._running_requested = False
        with self._wakeup:
            self._wakeup.notify_all()
        if self._pace > 0 and self._running_requested:
            now = time.monotonic()
            if self._pace_anchor is None:
                self._pace_anchor = (now, session.sim_time)
            wall0, sim0 = self._pace_anchor
            ahead = (session.sim_time - sim0) / self._pace - (now - wall0)
            if ahead > 0:
                time.sleep(min(ahead, 0.05))

    # -- telemetry ------------------------------------------------------------

    def telemetry(self, decimation: int = DEFAULT_DECIMATION,
                  ) -> Iterator[tuple[str, dict]]:
        """Ordered stream of (event, payload).

        Emits one state snapshot, then decimated tick frames (absolute
        indices k % decimation == 0, so concurrent subscribers see
        identical sequences) interleaved with session events, then a
        terminal end event. Late subscribers get the snapshot and deltas
        from the current head only; slow consumers drop the oldest pending
        frames rather than reorder; a session reset ends the stream.
        """
        if decimation < 1:
            raise ValueError("decimation must be >= 1")
        session = self._session
        generation = self._generation
        records = session.log.records
        events = session.log.events

        head = len(records)
        next_tick = ((head + decimation - 1) // decimation) * decimation
        next_event = len(events)
        snapshot = self.view()
        if head:
            last = records[head - 1]
            snapshot["last_tick"] = {"t": last.t, "v_true": last.v_true,
                                     "v_est": last.v_est, "x": last.x,
                                     "y": last.y}
        yield "snapshot", snapshot

        while True:
            if self._generation != generation:
                yield "end", {"state": "reset"}
                return
            head = len(records)
            backlog = (head - next_tick) // decimation
            if backlog > MAX_BACKLOG_FRAMES:
                skip_frames = backlog - MAX_BACKLOG_FRAMES
                next_tick += skip_frames * decimation
            emitted = False
            while next_tick < head:
                record = records[next_tick]
                while (next_event < len(events)
                       and events[next_event].t <= record.t):
                    ev = events[next_event]
                    yield "event", {"t": ev.t, "kind": ev.kind,
                                    "detail": ev.detail}
                    next_event += 1
                yield "tick", {
                    "t": record.t, "x": record.x, "y": record.y,
                    "heading": record.heading, "v_true": record.v_true,
                    "v_est": record.v_est, "v_wheel": record.v_wheel,
                    "ax_imu": record.ax_imu, "gyro_z": record.gyro_z,
                    "pressure": record.pressure, "cmd_a": record.cmd_a,
                    "cmd_yaw": record.cmd_yaw, "brake": record.brake,
                }
                next_tick += decimation
                emitted = True
            if session.state in (SessionState.COMPLETED, SessionState.FAULTED):
                while next_event < len(events):
                    ev = events[next_event]
                    yield "event", {"t": ev.t, "kind": ev.kind,
                                    "detail": ev.detail}
                    next_event += 1
                yield "end", {"state": session.state.value,
                              "tick_count": len(records)}
                return
            if not emitted:
                with self._wakeup:
                    self._wakeup.wait(0.25)


class IllegalTransition(RuntimeError):
    """Lifecycle command not valid in the current state."""


class HostRegistry:
    """Engine-backed collection of hosted sessions for the gateway."""

    def __init__(self):
        from .session import Engine
        self._engine = Engine()
        self._hosts: dict[int, SessionHost] = {}
        self._lock = threading.Lock()

    def create(self, cfg: ScenarioConfig) -> SessionHost:
        session = self._engine.create_session(cfg)
        host = SessionHost(session)
        with self._lock:
            self._hosts[session.id] = host
        return host

    def get(self, session_id: int) -> SessionHost:
        with self._lock:
            if session_id not in self._hosts:
                raise KeyError(f"no session {session_id}")
            return self._hosts[session_id]

    def all(self) -> list[SessionHost]:
        with self._lock:
            return list(self._hosts.values())

    def shutdown(self) -> None:
        for host in self.all():
            host.shutdown()
