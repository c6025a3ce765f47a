"""Advice codecs: k-bit average approximation with self-delimiting framing,
and the two-value (largest size, remaining fraction) scheme.

Bit strings are plain ASCII '0'/'1' strings throughout; that is also the
CLI wire format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import CAPACITY_EPS, LevelSum, PackingResult, check_sizes, opt_pack
from .engine import run_at

MAX_LEADING_ZEROS = 40  # encode_average requires a >= 2^-40


class AdviceError(ValueError):
    """Malformed advice value or unparseable frame."""


def _check_bits(bits: str, what: str) -> None:
    if not isinstance(bits, str) or any(c not in "01" for c in bits):
        raise AdviceError(f"{what} must be a string of 0/1, got {bits!r}")


@dataclass(frozen=True)
class SingleValueAdvice:
    """z leading zeros after the binary point, then the next k bits of a."""

    z: int
    s: str  # k bits, leading bit 1

    def __post_init__(self) -> None:
        _check_bits(self.s, "s")
        if len(self.s) < 1 or self.s[0] != "1":
            raise AdviceError(f"s must be nonempty with leading bit 1, got {self.s!r}")
        if self.z < 0:
            raise AdviceError(f"z must be nonnegative, got {self.z}")

    @property
    def k(self) -> int:
        return len(self.s)

    @property
    def ahat(self) -> float:
        return int(self.s, 2) / 2 ** (self.z + self.k)


def encode_average(a: float, k: int) -> SingleValueAdvice:
    """Truncate a to z leading zeros plus the next k bits of its binary expansion."""
    if not (0.0 < a < 1.0):
        raise AdviceError(f"average must lie in (0, 1), got {a}")
    if k < 1:
        raise AdviceError(f"requires k >= 1, got {k}")
    exact = Fraction(a)  # binary floats are dyadic, so this is lossless
    z = 0
    x = exact
    while x < Fraction(1, 2):
        x *= 2
        z += 1
        if z > MAX_LEADING_ZEROS:
            raise AdviceError(f"average below 2^-{MAX_LEADING_ZEROS} not encodable")
    s_val = int(exact * 2 ** (z + k))  # floor; in [2^(k-1), 2^k)
    return SingleValueAdvice(z=z, s=format(s_val, f"0{k}b"))


def _unary_field(value: int, width: int) -> str:
    payload = format(value, f"0{width}b") if width else ""
    return "1" * width + "0" + payload


def frame_self_delimiting(adv: SingleValueAdvice) -> str:
    """Frame z and s left-to-right parseably.

    Each field is its payload width in unary (ones then a zero) followed by
    exactly that many payload bits; z uses width ceil(log2(z+1)), s uses
    width k.  Total length is at most 2(k + ceil(log2(z+1)) + 1).
    """
    wz = adv.z.bit_length()  # == ceil(log2(z+1))
    return _unary_field(adv.z, wz) + "1" * adv.k + "0" + adv.s


def parse_self_delimiting(frame: str) -> SingleValueAdvice:
    """Inverse of frame_self_delimiting; rejects malformed or trailing bits."""
    _check_bits(frame, "frame")

    pos = 0

    def read_field() -> tuple[int, str]:
        nonlocal pos
        width = 0
        while pos < len(frame) and frame[pos] == "1":
            width += 1
            pos += 1
        if pos >= len(frame):
            raise AdviceError("truncated frame: missing width terminator")
        pos += 1  # the zero
        if pos + width > len(frame):
            raise AdviceError("truncated frame: payload shorter than declared width")
        payload = frame[pos : pos + width]
        pos += width
        return width, payload

    wz, z_payload = read_field()
    z = int(z_payload, 2) if wz else 0
    if wz and z.bit_length() != wz:
        raise AdviceError(f"non-canonical z payload {z_payload!r}")
    k, s_payload = read_field()
    if k < 1:
        raise AdviceError("empty s field")
    if pos != len(frame):
        raise AdviceError(f"{len(frame) - pos} trailing bits after advice frame")
    return SingleValueAdvice(z=z, s=s_payload)


def run_at_with_encoded_advice(seq: Iterable[float], frame: str) -> PackingResult:
    """Decode a self-delimiting frame and run the trusted-advice algorithm."""
    adv = parse_self_delimiting(frame)
    return run_at(seq, adv.ahat)


# ---------------------------------------------------------------------------
# Two-value advice


@dataclass(frozen=True)
class TwoValueAdvice:
    """k-bit approximations of the largest optimal size and the leftover fraction."""

    z: int
    s_bits: str  # k bits of the largest OPT-accepted size, leading bit 1
    t_bits: str  # k most significant bits of the fraction t

    def __post_init__(self) -> None:
        _check_bits(self.s_bits, "s_bits")
        _check_bits(self.t_bits, "t_bits")
        if self.z < 0:
            raise AdviceError(f"z must be nonnegative, got {self.z}")
        if len(self.s_bits) != len(self.t_bits) or len(self.s_bits) < 1:
            raise AdviceError("s_bits and t_bits must have the same positive length")
        if self.s_bits[0] != "1":
            raise AdviceError("s_bits must have leading bit 1")

    @property
    def k(self) -> int:
        return len(self.s_bits)

    @property
    def s_hat(self) -> float:
        return int(self.s_bits, 2) / 2 ** (self.z + self.k)

    @property
    def t_hat(self) -> float:
        return int(self.t_bits, 2) / 2 ** self.k

    @property
    def window_width(self) -> float:
        return 1.0 / 2 ** (self.z + self.k)


def encode_two_value(seq: Iterable[float], k: int) -> TwoValueAdvice:
    """Derive two-value advice from a sequence's offline optimum."""
    result = opt_pack(seq)
    if result.profit == 0:
        raise AdviceError("optimal packing is empty; two-value advice undefined")
    s_max = result.accepted_sizes[-1]
    if s_max >= 1.0:
        raise AdviceError("largest optimal size must be below 1 for this encoding")
    single = encode_average(s_max, k)
    filled_below = math.fsum(x for x in result.accepted_sizes if x < single.ahat)
    t = max(0.0, 1.0 - filled_below)
    t_val = min(2**k - 1, int(t * 2**k))
    return TwoValueAdvice(z=single.z, s_bits=single.s, t_bits=format(t_val, f"0{k}b"))


def run_two_value_advice(seq: Iterable[float], adv: TwoValueAdvice) -> PackingResult:
    """Accept everything below s-hat; budget the window [s-hat, s-hat + 2^-(z+k)) by t-hat.

    Window items are accepted while their cumulative size stays within the
    advised leftover fraction; anything at or above the window is rejected.
    """
    sizes = check_sizes(seq)
    s_hat = adv.s_hat
    upper = s_hat + adv.window_width
    budget = adv.t_hat
    level = LevelSum()
    window_sum = 0.0
    trace = []
    accepted = []
    for x in sizes:
        if x < s_hat:
            take = level.value + x <= 1.0 + CAPACITY_EPS
        elif x < upper:
            take = window_sum + x <= budget and level.value + x <= 1.0 + CAPACITY_EPS
            if take:
                window_sum += x
        else:
            take = False
        if take:
            level.add(x)
            accepted.append(x)
        trace.append(take)
    return PackingResult(len(accepted), level.value, tuple(trace), tuple(sorted(accepted)))


def two_value_guaranteed_ratio(k: int) -> float:
    """Worst-case profit ratio of the two-value scheme on window-saturated inputs."""
    return 2 ** (2 * k) / (2**k + 1) ** 2
