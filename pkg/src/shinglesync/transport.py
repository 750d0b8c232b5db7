"""Byte-exact framed transport with bit metering.

Frames are a 4-byte big-endian payload length, a 1-byte kind, then the
payload.  The in-process channel pair and the socket-backed endpoint carry
identical bytes; counters account for every framed byte in both directions.
"""

from __future__ import annotations

import queue
import socket
import struct
from dataclasses import dataclass
from enum import IntEnum

from .errors import ProtocolError, TransportClosedError

MAX_PAYLOAD = 1 << 26
HEADER = struct.Struct(">IB")


class FrameKind(IntEnum):
    HELLO = 1
    EVAL_BUNDLE = 2
    EVAL_PAIR = 3
    DELTA_REQ = 4
    DELTA = 5
    MERGES = 6
    DONE = 7
    ABORT = 8


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    payload: bytes = b""

    def encode(self) -> bytes:
        if len(self.payload) > MAX_PAYLOAD:
            raise ProtocolError("payload too large")
        return HEADER.pack(len(self.payload), int(self.kind)) + self.payload

    @classmethod
    def decode(cls, data: bytes) -> "Frame":
        if len(data) < HEADER.size:
            raise ProtocolError("truncated frame header")
        length, kind = HEADER.unpack_from(data)
        if len(data) != HEADER.size + length:
            raise ProtocolError("frame length mismatch")
        try:
            kind = FrameKind(kind)
        except ValueError:
            raise ProtocolError(f"unknown frame kind {kind}") from None
        return cls(kind, data[HEADER.size :])


class Endpoint:
    """Common counter bookkeeping; subclasses move the bytes."""

    def __init__(self):
        self._bytes_sent = 0
        self._bytes_received = 0

    def bits_sent(self) -> int:
        return self._bytes_sent * 8

    def bits_received(self) -> int:
        return self._bytes_received * 8

    def send(self, frame: Frame) -> None:
        data = frame.encode()
        self._send_bytes(data)
        self._bytes_sent += len(data)

    def recv(self) -> Frame:
        header = self._recv_exactly(HEADER.size)
        length, _ = HEADER.unpack(header)
        if length > MAX_PAYLOAD:
            raise ProtocolError("payload too large")
        body = self._recv_exactly(length) if length else b""
        self._bytes_received += len(header) + len(body)
        return Frame.decode(header + body)

    def _send_bytes(self, data: bytes) -> None:
        raise NotImplementedError

    def _recv_exactly(self, n: int) -> bytes:
        raise NotImplementedError

    def close(self) -> None:
        raise NotImplementedError


class PipeEndpoint(Endpoint):
    """One side of an in-process duplex channel."""

    _CLOSED = object()

    def __init__(self):
        super().__init__()
        self._inbox: queue.Queue = queue.Queue()
        self._peer: "PipeEndpoint | None" = None
        self._buffer = b""

    def _send_bytes(self, data: bytes) -> None:
        if self._peer is None:
            raise TransportClosedError("endpoint is not connected")
        self._peer._inbox.put(data)

    def _recv_exactly(self, n: int) -> bytes:
        while len(self._buffer) < n:
            chunk = self._inbox.get()
            if chunk is self._CLOSED:
                raise TransportClosedError("peer closed the channel")
            self._buffer += chunk
        out, self._buffer = self._buffer[:n], self._buffer[n:]
        return out

    def close(self) -> None:
        if self._peer is not None:
            self._peer._inbox.put(self._CLOSED)


def channel_pair() -> tuple[PipeEndpoint, PipeEndpoint]:
    a, b = PipeEndpoint(), PipeEndpoint()
    a._peer, b._peer = b, a
    return a, b


class SocketEndpoint(Endpoint):
    def __init__(self, sock: socket.socket):
        super().__init__()
        self._sock = sock

    def _send_bytes(self, data: bytes) -> None:
        try:
            self._sock.sendall(data)
        except OSError as exc:
            raise TransportClosedError(str(exc)) from exc

    def _recv_exactly(self, n: int) -> bytes:
        parts = []
        remaining = n
        while remaining:
            try:
                chunk = self._sock.recv(remaining)
            except OSError as exc:
                raise TransportClosedError(str(exc)) from exc
            if not chunk:
                raise TransportClosedError("peer closed the connection")
            parts.append(chunk)
            remaining -= len(chunk)
        return b"".join(parts)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


class Listener:
    """Bound listening socket; accept() yields one framed endpoint at a time."""

    def __init__(self, host: str, port: int):
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((host, port))
        self._sock.listen(1)
        self.host, self.port = self._sock.getsockname()[:2]

    def accept(self) -> SocketEndpoint:
        conn, _ = self._sock.accept()
        return SocketEndpoint(conn)

    def close(self) -> None:
        try:
            self._sock.close()
        except OSError:
            pass


def connect(host: str, port: int) -> SocketEndpoint:
    sock = socket.create_connection((host, port))
    return SocketEndpoint(sock)
