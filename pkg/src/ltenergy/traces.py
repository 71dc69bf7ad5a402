"""Trace-driven energy evaluation for connection-oriented workloads.

Transport protocols with rate control tie transfer times to the round-trip
time, which defeats the closed-form model.  This module instead ingests
per-packet timing exports (one tab-separated line per packet, as produced
by standard analyzer field exports), extracts the per-cycle phase durations
of an upload-style (POST) or download-style (GET) exchange, and feeds the
measured phases into the same energy accounting as the analytic path.

A deterministic synthetic trace generator stands in for a live testbed: it
emulates a window-growth transfer whose completion time grows with the
round-trip time, so placement comparisons can be exercised end to end.

``event_driven_energy`` generalises the radio state machine to arbitrary
event sequences and serves as an independent cross-check of the closed-form
cycle energy.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from random import Random
from typing import Iterable, Sequence

from .analytic import (
    DEFAULT_DOWNLINK_BPS,
    DEFAULT_UPLINK_BPS,
    EnergyBreakdown,
    PhaseTiming,
    cycle_energy,
    idle_gap_energy,
    timing_from_phases,
    transfer_time,
)
from .power_model import PowerProfile

__all__ = [
    "Direction",
    "PacketEvent",
    "TraceIteration",
    "AggregateResult",
    "WorkloadPoint",
    "TraceParseError",
    "IncompleteExchangeError",
    "parse_events",
    "events_to_lines",
    "extract_post_phases",
    "extract_get_phases",
    "iteration_energy",
    "event_driven_energy",
    "canonical_cycle_events",
    "aggregate",
    "rho_from_traces",
    "synthesize_trace",
    "scheduled_phases",
    "workload_summary",
]

MSS_BYTES = 1448

# Synthetic generator conventions.  The client endpoint is fixed so traces
# can be analysed without out-of-band metadata; seeds vary the sequence
# number space only.
SYNTH_CLIENT = "198.51.100.10:52000"
SYNTH_SERVER = "203.0.113.5:80"
GET_REQUEST_BYTES = 150
POST_HEADER_BYTES = 160
POST_STATUS_BYTES = 100
_INIT_WINDOW_SEGMENTS = 10
_TURNAROUND_US = 200
_ACK_DELAY_US = 100
_SERVER_THINK_US = 2000


class Direction(Enum):
    CLIENT_TO_SERVER = "client_to_server"
    SERVER_TO_CLIENT = "server_to_client"


class TraceParseError(ValueError):
    """A trace line could not be parsed; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class IncompleteExchangeError(ValueError):
    """The events do not form one complete request-response exchange."""


@dataclass(frozen=True)
class PacketEvent:
    """One timestamped packet record from a trace export."""

    timestamp: float  # epoch seconds, microsecond precision
    src_addr: str
    src_port: int
    dst_addr: str
    dst_port: int
    payload_len: int  # transport payload bytes
    flags: frozenset[str]  # subset of {SYN, FIN, RST, ACK, PSH}
    seq: int
    ack: int
    stream_id: str
    direction: Direction | None = None

    @property
    def src(self) -> str:
        return f"{self.src_addr}:{self.src_port}"

    @property
    def dst(self) -> str:
        return f"{self.dst_addr}:{self.dst_port}"

    @property
    def is_connection_admin(self) -> bool:
        """Handshake or teardown packet (excluded from phase extraction)."""
        return bool(self.flags & {"SYN", "FIN", "RST"})

    def direction_for(self, client: str) -> Direction:
        if self.src == client:
            return Direction.CLIENT_TO_SERVER
        if self.dst == client:
            return Direction.SERVER_TO_CLIENT
        raise ValueError(
            f"packet {self.src} -> {self.dst} does not involve client {client}"
        )


@dataclass(frozen=True)
class TraceIteration:
    """Measured phases of one request-response exchange.

    The residual quiet time is not a property of the trace; it is derived
    from the application period at analysis time, so ``phase.t_q`` is zero
    here.
    """

    phase: PhaseTiming
    app_kind: str  # "post" or "get"
    file_size: int  # application bytes moved in the bulk direction
    repetition_index: int = 0

    def __post_init__(self) -> None:
        if self.app_kind not in ("post", "get"):
            raise ValueError("app_kind must be 'post' or 'get'")


_FLAG_LETTERS = {"S": "SYN", "F": "FIN", "R": "RST", "P": "PSH", "A": "ACK"}
_FLAG_BITS = (("FIN", 0x01), ("SYN", 0x02), ("RST", 0x04),
              ("PSH", 0x08), ("ACK", 0x10))
# Letters tolerated in analyzer exports but not tracked by the model.
_IGNORED_FLAG_CHARS = set(".*-·ECUW")


def _parse_flags(field: str, line_no: int) -> frozenset[str]:
    text = field.strip()
    if text in ("", "-"):
        return frozenset()
    if text.lower().startswith("0x") or text.isdigit():
        try:
            bits = int(text, 16) if text.lower().startswith("0x") else int(text)
        except ValueError:
            raise TraceParseError(line_no, f"bad flags field {field!r}") from None
        return frozenset(name for name, bit in _FLAG_BITS if bits & bit)
    out = set()
    for ch in text:
        upper = ch.upper()
        if upper in _FLAG_LETTERS:
            out.add(_FLAG_LETTERS[upper])
        elif ch in _IGNORED_FLAG_CHARS or upper in _IGNORED_FLAG_CHARS:
            continue
        else:
            raise TraceParseError(line_no, f"bad flags field {field!r}")
    return frozenset(out)


def _parse_int(field: str, what: str, line_no: int) -> int:
    text = field.strip()
    if text in ("", "-"):
        return 0
    try:
        return int(text)
    except ValueError:
        raise TraceParseError(line_no, f"bad {what} {field!r}") from None


def _stream_id(a: str, b: str) -> str:
    return "|".join(sorted((a, b)))


def parse_events(lines: str | Iterable[str],
                 client: str | None = None) -> list[PacketEvent]:
    """Parse a packet field export into a time-ordered event list.

    Line format (tab-separated): epoch timestamp with six decimals, source
    address, destination address, source port, destination port, transport
    payload length, flags (hex value or letter set), sequence number,
    acknowledgment number.  Blank lines and ``#`` comments are skipped.

    ``client`` ("addr:port") fixes the packet directions; when omitted it
    is inferred from the first connection-opening packet, falling back to
    the first payload-bearing packet and then to the first packet.
    """
    if isinstance(lines, str):
        lines = lines.splitlines()

    events: list[PacketEvent] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 9:
            raise TraceParseError(
                line_no, f"expected 9 tab-separated fields, got {len(parts)}"
            )
        ts_text = parts[0].strip()
        try:
            timestamp = float(ts_text)
        except ValueError:
            raise TraceParseError(
                line_no, f"bad timestamp {ts_text!r}"
            ) from None
        src_addr = parts[1].strip()
        dst_addr = parts[2].strip()
        src_port = _parse_int(parts[3], "source port", line_no)
        dst_port = _parse_int(parts[4], "destination port", line_no)
        payload = _parse_int(parts[5], "payload length", line_no)
        if payload < 0:
            raise TraceParseError(line_no, "payload length must be >= 0")
        flags = _parse_flags(parts[6], line_no)
        seq = _parse_int(parts[7], "sequence number", line_no)
        ack = _parse_int(parts[8], "acknowledgment number", line_no)
        src = f"{src_addr}:{src_port}"
        dst = f"{dst_addr}:{dst_port}"
        events.append(PacketEvent(
            timestamp=timestamp,
            src_addr=src_addr, src_port=src_port,
            dst_addr=dst_addr, dst_port=dst_port,
            payload_len=payload, flags=flags, seq=seq, ack=ack,
            stream_id=_stream_id(src, dst),
        ))

    events.sort(key=lambda e: e.timestamp)
    if not events:
        return []

    if client is None:
        client = _infer_client(events)
    return [
        PacketEvent(
            timestamp=e.timestamp,
            src_addr=e.src_addr, src_port=e.src_port,
            dst_addr=e.dst_addr, dst_port=e.dst_port,
            payload_len=e.payload_len, flags=e.flags, seq=e.seq, ack=e.ack,
            stream_id=e.stream_id, direction=e.direction_for(client),
        )
        for e in events
    ]


def _infer_client(events: Sequence[PacketEvent]) -> str:
    for e in events:
        if "SYN" in e.flags and "ACK" not in e.flags:
            return e.src
    for e in events:
        if e.payload_len > 0:
            return e.src
    return events[0].src


def events_to_lines(events: Iterable[PacketEvent]) -> list[str]:
    """Serialise events back into the ingestion line format."""
    order = ("SYN", "FIN", "RST", "PSH", "ACK")
    letters = {v: k for k, v in _FLAG_LETTERS.items()}
    lines = []
    for e in events:
        flags = "".join(letters[f] for f in order if f in e.flags) or "-"
        lines.append("\t".join((
            f"{e.timestamp:.6f}",
            e.src_addr, e.dst_addr,
            str(e.src_port), str(e.dst_port),
            str(e.payload_len), flags, str(e.seq), str(e.ack),
        )))
    return lines


def _split_exchange(events: Sequence[PacketEvent], client: str):
    """Directional payload/ack views of the exchange, admin traffic removed."""
    data = [e for e in events if not e.is_connection_admin]
    c2s = [e for e in data
           if e.direction_for(client) is Direction.CLIENT_TO_SERVER]
    s2c = [e for e in data
           if e.direction_for(client) is Direction.SERVER_TO_CLIENT]
    return c2s, s2c


def _stream_span(packets: Sequence[PacketEvent]) -> int:
    """Bytes covered by a list of payload packets, retransmissions deduped."""
    lo = min(e.seq for e in packets)
    hi = max(e.seq + e.payload_len for e in packets)
    return hi - lo


def extract_post_phases(events: Sequence[PacketEvent], client: str,
                        repetition_index: int = 0) -> TraceIteration:
    """Phase durations of an upload-style exchange.

    The upload spans the first client payload packet through the first
    server packet with no payload whose acknowledgment covers the last
    uploaded byte (retransmissions extend the upload, since the covering
    acknowledgment arrives after them).  The download spans the server's
    response through the client packet acknowledging all of it, and the
    wait is the gap in between.
    """
    c2s, s2c = _split_exchange(events, client)
    upload = [e for e in c2s if e.payload_len > 0]
    if not upload:
        raise IncompleteExchangeError("no request payload from the client")
    upload_end = max(e.seq + e.payload_len for e in upload)
    upload_start_t = upload[0].timestamp

    covering = [e for e in s2c if e.payload_len == 0 and e.ack >= upload_end]
    if not covering:
        raise IncompleteExchangeError(
            "missing the server acknowledgment that covers the upload"
        )
    final_ack = covering[0]

    response = [e for e in s2c if e.payload_len > 0]
    if not response:
        raise IncompleteExchangeError("missing the server response")
    if response[0].timestamp < final_ack.timestamp:
        raise IncompleteExchangeError(
            "server response precedes the upload acknowledgment"
        )
    response_end = max(e.seq + e.payload_len for e in response)
    resp_start = response[0]

    client_acks = [
        e for e in c2s
        if e.ack >= response_end and e.timestamp >= resp_start.timestamp
    ]
    if not client_acks:
        raise IncompleteExchangeError(
            "missing the client acknowledgment of the response"
        )
    final_client_ack = client_acks[0]

    t_tx = (final_ack.timestamp - upload_start_t) * 1000.0
    t_w = (resp_start.timestamp - final_ack.timestamp) * 1000.0
    t_rx = (final_client_ack.timestamp - resp_start.timestamp) * 1000.0
    return TraceIteration(
        phase=PhaseTiming(t_tx=t_tx, t_w=t_w, t_rx=t_rx, t_q=0.0),
        app_kind="post",
        file_size=_stream_span(upload),
        repetition_index=repetition_index,
    )


def extract_get_phases(events: Sequence[PacketEvent], client: str,
                       repetition_index: int = 0) -> TraceIteration:
    """Phase durations of a download-style exchange.

    Mirrors the upload case: the request spans the client's request packet
    through the server acknowledgment covering it; the download spans the
    first response byte through the client packet acknowledging the whole
    transfer (the download therefore includes that final acknowledgment's
    send time); the wait is the gap in between.
    """
    c2s, s2c = _split_exchange(events, client)
    request = [e for e in c2s if e.payload_len > 0]
    if not request:
        raise IncompleteExchangeError("no request payload from the client")
    request_end = max(e.seq + e.payload_len for e in request)
    request_start_t = request[0].timestamp

    covering = [e for e in s2c if e.payload_len == 0 and e.ack >= request_end]
    if not covering:
        raise IncompleteExchangeError(
            "missing the server acknowledgment of the request"
        )
    request_ack = covering[0]

    response = [e for e in s2c if e.payload_len > 0]
    if not response:
        raise IncompleteExchangeError("zero-length response")
    if response[0].timestamp < request_ack.timestamp:
        raise IncompleteExchangeError(
            "server response precedes the request acknowledgment"
        )
    response_end = max(e.seq + e.payload_len for e in response)
    resp_start = response[0]

    client_acks = [
        e for e in c2s
        if e.ack >= response_end and e.timestamp >= resp_start.timestamp
    ]
    if not client_acks:
        raise IncompleteExchangeError(
            "missing the client acknowledgment of the transfer"
        )
    final_client_ack = client_acks[0]

    t_tx = (request_ack.timestamp - request_start_t) * 1000.0
    t_w = (resp_start.timestamp - request_ack.timestamp) * 1000.0
    t_rx = (final_client_ack.timestamp - resp_start.timestamp) * 1000.0
    return TraceIteration(
        phase=PhaseTiming(t_tx=t_tx, t_w=t_w, t_rx=t_rx, t_q=0.0),
        app_kind="get",
        file_size=_stream_span(response),
        repetition_index=repetition_index,
    )


def iteration_energy(iteration: TraceIteration, t_i: float,
                     profile: PowerProfile) -> EnergyBreakdown:
    """Energy of one measured exchange inside a period of ``t_i`` ms.

    The residual quiet time and promotion charges are derived exactly as in
    the analytic path, so measured and computed phases share one accounting.
    """
    timing = timing_from_phases(
        iteration.phase.t_tx, iteration.phase.t_w, iteration.phase.t_rx,
        t_i, profile,
    )
    return cycle_energy(timing, profile)


def event_driven_energy(events: Sequence[PacketEvent], profile: PowerProfile,
                        window: tuple[float, float], *,
                        client: str | None = None,
                        uplink_bps: float = DEFAULT_UPLINK_BPS,
                        downlink_bps: float = DEFAULT_DOWNLINK_BPS) -> float:
    """Walk the radio state machine over an arbitrary event sequence (mJ).

    The radio starts in CR at the window start.  Each silent gap accrues
    energy along the decay chain; when a gap is long enough that the radio
    reached IDLE and a promotion fits in its tail, the tail is billed as a
    promotion instead of idle time.  Client payload bytes accrue at the
    transmit power for their serialisation time, server bytes at the
    receive power; the window is in epoch seconds like the timestamps.
    """
    start_s, end_s = window
    if end_s < start_s:
        raise ValueError("window end precedes window start")
    for earlier, later in zip(events, events[1:]):
        if later.timestamp < earlier.timestamp:
            raise ValueError("events must be sorted by timestamp")
    if events and (events[0].timestamp < start_s
                   or events[-1].timestamp > end_s):
        raise ValueError("window does not cover the events")

    threshold = profile.idle_entry_ms

    def gap_energy(gap: float) -> float:
        if gap > threshold + profile.t_prom:
            return (idle_gap_energy(gap - profile.t_prom, profile)
                    + profile.promotion_energy_mj)
        return idle_gap_energy(gap, profile)

    cursor = start_s * 1000.0
    total = 0.0
    for e in events:
        t_ms = e.timestamp * 1000.0
        total += gap_energy(max(t_ms - cursor, 0.0))
        direction = e.direction
        if direction is None:
            if client is None:
                raise ValueError(
                    "events carry no direction and no client endpoint given"
                )
            direction = e.direction_for(client)
        if direction is Direction.CLIENT_TO_SERVER:
            duration = transfer_time(e.payload_len, uplink_bps)
            total += duration * profile.p_tx / 1000.0
        else:
            duration = transfer_time(e.payload_len, downlink_bps)
            total += duration * profile.p_rx / 1000.0
        cursor = max(cursor, t_ms + duration)

    tail = end_s * 1000.0 - cursor
    if tail < -1e-6:
        raise ValueError("window ends before the last transfer completes")
    total += idle_gap_energy(max(tail, 0.0), profile)
    return total


def _segment_sizes(total: int) -> list[int]:
    full, rem = divmod(total, MSS_BYTES)
    return [MSS_BYTES] * full + ([rem] if rem else [])


def _synthetic_event(t_s: float, from_client: bool, payload: int,
                     flags: frozenset[str], seq: int, ack: int) -> PacketEvent:
    src, dst = (SYNTH_CLIENT, SYNTH_SERVER) if from_client \
        else (SYNTH_SERVER, SYNTH_CLIENT)
    src_addr, src_port = src.rsplit(":", 1)
    dst_addr, dst_port = dst.rsplit(":", 1)
    return PacketEvent(
        timestamp=t_s,
        src_addr=src_addr, src_port=int(src_port),
        dst_addr=dst_addr, dst_port=int(dst_port),
        payload_len=payload, flags=flags, seq=seq, ack=ack,
        stream_id=_stream_id(SYNTH_CLIENT, SYNTH_SERVER),
        direction=Direction.CLIENT_TO_SERVER if from_client
        else Direction.SERVER_TO_CLIENT,
    )


def canonical_cycle_events(b_tx: int, b_rx: int, t_w: float, t_q: float, *,
                           prom_tx: bool = False, prom_rx: bool = False,
                           profile: PowerProfile,
                           uplink_bps: float = DEFAULT_UPLINK_BPS,
                           downlink_bps: float = DEFAULT_DOWNLINK_BPS,
                           ) -> tuple[list[PacketEvent], PhaseTiming,
                                      tuple[float, float]]:
    """Event sequence of one idealised request-response cycle.

    Upload segments go back to back at the uplink rate, then the response
    arrives after the wait, then the residual quiet time runs out and a
    zero-payload marker opens the next cycle at the window end.  Charged
    promotions occupy real time inside the corresponding gap, so walking
    the returned events with :func:`event_driven_energy` reproduces
    :func:`ltenergy.analytic.cycle_energy` on the returned timing.
    """
    if b_tx < 1 or b_rx < 1:
        raise ValueError("canonical cycles need at least one byte each way")
    t_tx = transfer_time(b_tx, uplink_bps)
    t_rx = transfer_time(b_rx, downlink_bps)
    timing = PhaseTiming(t_tx=t_tx, t_w=t_w, t_rx=t_rx, t_q=t_q,
                         prom_tx=prom_tx, prom_rx=prom_rx)

    events: list[PacketEvent] = []
    cursor = 0.0  # ms
    seq = 0
    for seg in _segment_sizes(b_tx):
        events.append(_synthetic_event(
            cursor / 1000.0, True, seg, frozenset({"ACK"}), seq, 0))
        seq += seg
        cursor += transfer_time(seg, uplink_bps)
    cursor += t_w + (profile.t_prom if prom_rx else 0.0)
    seq = 0
    for seg in _segment_sizes(b_rx):
        events.append(_synthetic_event(
            cursor / 1000.0, False, seg, frozenset({"ACK"}), seq, 0))
        seq += seg
        cursor += transfer_time(seg, downlink_bps)
    cursor += t_q + (profile.t_prom if prom_tx else 0.0)
    events.append(_synthetic_event(
        cursor / 1000.0, True, 0, frozenset({"ACK"}), 0, 0))
    return events, timing, (0.0, cursor / 1000.0)


@dataclass(frozen=True)
class _PlannedPacket:
    t_us: int
    from_client: bool
    payload: int
    flags: frozenset[str]
    seq_rel: int  # offset into the sender's byte stream
    ack_rel: int  # cumulative acknowledgment into the peer's stream


@dataclass(frozen=True)
class _TracePlan:
    packets: tuple[_PlannedPacket, ...]
    request_us: int
    request_ack_us: int
    response_us: int | None
    final_ack_us: int | None


def _transfer_arrivals(n_segments: int, start_us: int, rtt_us: int,
                       seg_gap_us: float) -> list[float]:
    """Per-segment times of a window-growth transfer seen at one endpoint.

    The window starts at ``_INIT_WINDOW_SEGMENTS`` and doubles every round
    trip; segments within a round are spaced at the bottleneck serialisation
    time.  Once the window covers the round-trip time the rounds merge into
    a continuous stream.
    """
    times: list[float] = []
    cursor = float(start_us)
    sent = 0
    window = _INIT_WINDOW_SEGMENTS
    while sent < n_segments:
        count = min(n_segments - sent, window)
        times.extend(cursor + j * seg_gap_us for j in range(count))
        cursor = max(cursor + rtt_us, times[-1] + seg_gap_us)
        sent += count
        window *= 2
    return times


def _plan_trace(kind: str, file_size: int, rtt_ms: float,
                bottleneck_bps: float) -> _TracePlan:
    if kind not in ("post", "get"):
        raise ValueError("kind must be 'post' or 'get'")
    if file_size < 0:
        raise ValueError("file_size must be non-negative")
    if rtt_ms <= 0 or bottleneck_bps <= 0:
        raise ValueError("rtt and bottleneck must be strictly positive")

    rtt_us = round(rtt_ms * 1000.0)
    seg_gap_us = 8.0 * MSS_BYTES / bottleneck_bps * 1e6
    packets: list[_PlannedPacket] = []

    def pkt(t_us, from_client, payload, flags, seq_rel, ack_rel):
        packets.append(_PlannedPacket(
            int(t_us), from_client, payload, frozenset(flags),
            seq_rel, ack_rel))

    # Three-way handshake; the SYN consumes one sequence number.
    pkt(0, True, 0, {"SYN"}, 0, 0)
    pkt(rtt_us, False, 0, {"SYN", "ACK"}, 0, 1)
    pkt(rtt_us + _TURNAROUND_US, True, 0, {"ACK"}, 1, 1)
    request_us = rtt_us + 2 * _TURNAROUND_US

    if kind == "get":
        req_end = 1 + GET_REQUEST_BYTES
        pkt(request_us, True, GET_REQUEST_BYTES, {"PSH", "ACK"}, 1, 1)
        request_ack_us = request_us + rtt_us
        pkt(request_ack_us, False, 0, {"ACK"}, 1, req_end)

        response_us = final_ack_us = None
        client_next = req_end
        server_next = 1
        last_us = request_ack_us
        if file_size > 0:
            sizes = _segment_sizes(file_size)
            arrivals = _transfer_arrivals(
                len(sizes), request_ack_us + _SERVER_THINK_US,
                rtt_us, seg_gap_us)
            offset = 0
            for i, (t, size) in enumerate(zip(arrivals, sizes)):
                is_last = i == len(sizes) - 1
                flags = {"PSH", "ACK"} if is_last else {"ACK"}
                pkt(round(t), False, size, flags, 1 + offset, req_end)
                offset += size
                if i % 2 == 1 and not is_last:
                    pkt(round(t) + _ACK_DELAY_US, True, 0, {"ACK"},
                        req_end, 1 + offset)
            response_us = round(arrivals[0])
            final_ack_us = round(arrivals[-1]) + _TURNAROUND_US
            pkt(final_ack_us, True, 0, {"ACK"}, req_end, 1 + file_size)
            client_next = req_end
            server_next = 1 + file_size
            last_us = final_ack_us
    else:
        total = POST_HEADER_BYTES + file_size
        sizes = _segment_sizes(total)
        sends = _transfer_arrivals(len(sizes), request_us, rtt_us, seg_gap_us)
        offset = 0
        for i, (t, size) in enumerate(zip(sends, sizes)):
            is_last = i == len(sizes) - 1
            flags = {"PSH", "ACK"} if is_last else {"ACK"}
            pkt(round(t), True, size, flags, 1 + offset, 1)
            offset += size
            if i % 2 == 1 and not is_last:
                pkt(round(t) + rtt_us, False, 0, {"ACK"}, 1, 1 + offset)
        request_ack_us = round(sends[-1]) + rtt_us
        pkt(request_ack_us, False, 0, {"ACK"}, 1, 1 + total)

        response_us = final_ack_us = None
        client_next = 1 + total
        server_next = 1
        last_us = request_ack_us
        if file_size > 0:
            response_us = request_ack_us + _SERVER_THINK_US
            pkt(response_us, False, POST_STATUS_BYTES, {"PSH", "ACK"},
                1, 1 + total)
            server_next = 1 + POST_STATUS_BYTES
            final_ack_us = response_us + _TURNAROUND_US
            pkt(final_ack_us, True, 0, {"ACK"}, 1 + total, server_next)
            last_us = final_ack_us

    # Teardown: client closes, server closes back.
    fin_us = last_us + 2 * _TURNAROUND_US
    pkt(fin_us, True, 0, {"FIN", "ACK"}, client_next, server_next)
    pkt(fin_us + rtt_us, False, 0, {"FIN", "ACK"},
        server_next, client_next + 1)
    pkt(fin_us + rtt_us + _TURNAROUND_US, True, 0, {"ACK"},
        client_next + 1, server_next + 1)

    ordered = tuple(sorted(packets, key=lambda p: p.t_us))
    return _TracePlan(
        packets=ordered,
        request_us=request_us,
        request_ack_us=request_ack_us,
        response_us=response_us,
        final_ack_us=final_ack_us,
    )


def synthesize_trace(kind: str, file_size: int, rtt_ms: float,
                     bottleneck_bps: float, seed: int = 0
                     ) -> list[PacketEvent]:
    """Deterministic synthetic exchange between a fixed client and server.

    Emulates a window-growth transfer bottlenecked at ``bottleneck_bps``:
    completion time strictly increases with the round-trip time.  Payload
    streams are segmented at {mss} bytes; handshake and teardown packets are
    included so exclusion logic can be exercised.  Upload exchanges prepend
    a {hdr}-byte request header to the file bytes; a zero ``file_size``
    degenerates to the request and its bare acknowledgment.  The seed varies
    the sequence number space only, never the timing.
    """
    plan = _plan_trace(kind, file_size, rtt_ms, bottleneck_bps)
    rng = Random(seed)
    isn_client = rng.randrange(1, 2 ** 31)
    isn_server = rng.randrange(1, 2 ** 31)

    events = []
    for p in plan.packets:
        own_isn = isn_client if p.from_client else isn_server
        peer_isn = isn_server if p.from_client else isn_client
        ack = 0 if p.flags == frozenset({"SYN"}) else peer_isn + p.ack_rel
        events.append(_synthetic_event(
            p.t_us / 1e6, p.from_client, p.payload, p.flags,
            own_isn + p.seq_rel, ack))
    return events


synthesize_trace.__doc__ = synthesize_trace.__doc__.format(
    mss=MSS_BYTES, hdr=POST_HEADER_BYTES)


def scheduled_phases(kind: str, file_size: int, rtt_ms: float,
                     bottleneck_bps: float) -> tuple[float, float, float]:
    """Phases (t_tx, t_w, t_rx) in ms that the generator schedules.

    Computed from the same packet landmarks that extraction recovers, via
    the same arithmetic, so extraction of a synthesized trace matches this
    exactly.  Requires a positive ``file_size`` (a degenerate exchange has
    no download phase).
    """
    plan = _plan_trace(kind, file_size, rtt_ms, bottleneck_bps)
    if plan.response_us is None or plan.final_ack_us is None:
        raise ValueError("a zero-byte exchange has no scheduled phases")
    request_s = plan.request_us / 1e6
    request_ack_s = plan.request_ack_us / 1e6
    response_s = plan.response_us / 1e6
    final_ack_s = plan.final_ack_us / 1e6
    return (
        (request_ack_s - request_s) * 1000.0,
        (response_s - request_ack_s) * 1000.0,
        (final_ack_s - response_s) * 1000.0,
    )


@dataclass(frozen=True)
class AggregateResult:
    """Energy and mean phases over the repetitions of one experiment."""

    total_mj: float
    breakdowns: tuple[EnergyBreakdown, ...]
    timings: tuple[PhaseTiming, ...]
    mean_t_tx: float
    mean_t_w: float
    mean_t_rx: float
    mean_t_q: float


def aggregate(iterations: Sequence[TraceIteration], t_i: float,
              profile: PowerProfile) -> AggregateResult:
    """Sum the per-repetition energies of one experiment.

    All iterations must come from the same application (same kind and file
    size); the total is the plain sum over repetitions and the mean phase
    durations support timing-oriented summaries.
    """
    if not iterations:
        raise ValueError("no iterations to aggregate")
    kinds = {it.app_kind for it in iterations}
    if len(kinds) > 1:
        raise ValueError(f"mixed application kinds: {sorted(kinds)}")
    sizes = {it.file_size for it in iterations}
    if len(sizes) > 1:
        raise ValueError(f"mixed file sizes: {sorted(sizes)}")

    breakdowns = []
    timings = []
    for it in iterations:
        timing = timing_from_phases(
            it.phase.t_tx, it.phase.t_w, it.phase.t_rx, t_i, profile)
        timings.append(timing)
        breakdowns.append(cycle_energy(timing, profile))
    return AggregateResult(
        total_mj=sum(b.e_i for b in breakdowns),
        breakdowns=tuple(breakdowns),
        timings=tuple(timings),
        mean_t_tx=statistics.fmean(t.t_tx for t in timings),
        mean_t_w=statistics.fmean(t.t_w for t in timings),
        mean_t_rx=statistics.fmean(t.t_rx for t in timings),
        mean_t_q=statistics.fmean(t.t_q for t in timings),
    )


def rho_from_traces(edge_iterations: Sequence[TraceIteration],
                    cloud_iterations: Sequence[TraceIteration],
                    t_i: float, profile: PowerProfile) -> float:
    """Edge-to-cloud energy ratio over matched measured repetitions."""
    if len(edge_iterations) != len(cloud_iterations):
        raise ValueError("edge and cloud repetition counts differ")
    edge = aggregate(edge_iterations, t_i, profile)
    cloud = aggregate(cloud_iterations, t_i, profile)
    if edge_iterations[0].app_kind != cloud_iterations[0].app_kind:
        raise ValueError("edge and cloud application kinds differ")
    if edge_iterations[0].file_size != cloud_iterations[0].file_size:
        raise ValueError("edge and cloud file sizes differ")
    return edge.total_mj / cloud.total_mj


@dataclass(frozen=True)
class WorkloadPoint:
    """Download-time summary at one server concurrency level."""

    concurrent_connections: int
    t_rx_mean: float
    repetitions: int
    ci95_half_width: float | None  # absent with a single repetition

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.concurrent_connections < 0:
            raise ValueError("concurrent_connections must be >= 0")


def workload_summary(
        points: Sequence[tuple[int, Sequence[TraceIteration]]]
) -> list[WorkloadPoint]:
    """Mean download time per concurrency level with 95% confidence.

    Half-widths use the normal approximation ``1.96 * s / sqrt(n)`` with the
    sample standard deviation; a single repetition has no half-width.
    """
    out = []
    for c, iterations in points:
        if not iterations:
            raise ValueError(f"no repetitions for concurrency level {c}")
        values = [it.phase.t_rx for it in iterations]
        n = len(values)
        half: float | None = None
        if n > 1:
            half = 1.96 * statistics.stdev(values) / n ** 0.5
        out.append(WorkloadPoint(
            concurrent_connections=c,
            t_rx_mean=statistics.fmean(values),
            repetitions=n,
            ci95_half_width=half,
        ))
    out.sort(key=lambda p: p.concurrent_connections)
    return out
