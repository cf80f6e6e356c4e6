from holomed.wire_protocol.messages import (
    MESSAGE_TYPES,
    ROLES,
    Envelope,
    decode,
    encode,
)
from holomed.wire_protocol.hub import BroadcastHub, ClientHandle
from holomed.wire_protocol.latency import LatencyLog, LatencySample, measure_latency

__all__ = [
    "BroadcastHub",
    "ClientHandle",
    "Envelope",
    "LatencyLog",
    "LatencySample",
    "MESSAGE_TYPES",
    "ROLES",
    "decode",
    "encode",
    "measure_latency",
]
