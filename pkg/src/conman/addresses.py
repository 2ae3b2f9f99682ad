"""Checksum validation and generation for payment addresses.

Covers the three address families scammers hand out: legacy Base58Check,
bech32 (``bc1...``), and hex account addresses with the mixed-case
checksum. Generators exist so tests and the simulator can mint valid
addresses; none of this performs real key derivation.
"""

from __future__ import annotations

from hashlib import sha256

from .keccak import keccak256
from .rng import SplitMix64

B58_ALPHABET = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"
_B58_INDEX = {c: i for i, c in enumerate(B58_ALPHABET)}

BECH32_CHARSET = "qpzry9x8gf2tvdw0s3jn54khce6mua7l"
_BECH32_INDEX = {c: i for i, c in enumerate(BECH32_CHARSET)}
_BECH32_GEN = (0x3B6A57B2, 0x26508E6D, 0x1EA119FA, 0x3D4233DD, 0x2A1462B3)


# ---------------------------------------------------------------------------
# Base58Check
# ---------------------------------------------------------------------------

def b58decode(s: str) -> bytes:
    """Decode base58 to bytes; raises ValueError on characters outside the alphabet."""
    n = 0
    for c in s:
        if c not in _B58_INDEX:
            raise ValueError(f"invalid base58 character {c!r}")
        n = n * 58 + _B58_INDEX[c]
    body = n.to_bytes((n.bit_length() + 7) // 8, "big") if n else b""
    pad = 0
    for c in s:
        if c == "1":
            pad += 1
        else:
            break
    return b"\x00" * pad + body


def b58encode(raw: bytes) -> str:
    n = int.from_bytes(raw, "big")
    out = []
    while n > 0:
        n, r = divmod(n, 58)
        out.append(B58_ALPHABET[r])
    pad = 0
    for b in raw:
        if b == 0:
            pad += 1
        else:
            break
    return "1" * pad + "".join(reversed(out))


def base58check_encode(version: int, payload: bytes) -> str:
    body = bytes([version]) + payload
    checksum = sha256(sha256(body).digest()).digest()[:4]
    return b58encode(body + checksum)


def is_valid_base58_address(addr: str) -> bool:
    """Legacy mainnet address: version 0x00 or 0x05, double-SHA256 checksum."""
    if not addr or addr[0] not in "13":
        return False
    try:
        raw = b58decode(addr)
    except ValueError:
        return False
    if len(raw) != 25:
        return False
    if raw[0] not in (0x00, 0x05):
        return False
    checksum = sha256(sha256(raw[:-4]).digest()).digest()[:4]
    return raw[-4:] == checksum


# ---------------------------------------------------------------------------
# Bech32 (BIP-173 checksum, witness v0 programs)
# ---------------------------------------------------------------------------

def _bech32_polymod(values: list[int]) -> int:
    chk = 1
    for v in values:
        top = chk >> 25
        chk = ((chk & 0x1FFFFFF) << 5) ^ v
        for i in range(5):
            if (top >> i) & 1:
                chk ^= _BECH32_GEN[i]
    return chk


def _bech32_hrp_expand(hrp: str) -> list[int]:
    return [ord(c) >> 5 for c in hrp] + [0] + [ord(c) & 31 for c in hrp]


def bech32_encode(hrp: str, data: list[int]) -> str:
    values = _bech32_hrp_expand(hrp) + data
    polymod = _bech32_polymod(values + [0, 0, 0, 0, 0, 0]) ^ 1
    checksum = [(polymod >> 5 * (5 - i)) & 31 for i in range(6)]
    return hrp + "1" + "".join(BECH32_CHARSET[d] for d in data + checksum)


def convertbits(data: bytes, frombits: int, tobits: int, pad: bool = True) -> list[int]:
    acc = 0
    bits = 0
    out = []
    maxv = (1 << tobits) - 1
    for b in data:
        acc = (acc << frombits) | b
        bits += frombits
        while bits >= tobits:
            bits -= tobits
            out.append((acc >> bits) & maxv)
    if pad and bits:
        out.append((acc << (tobits - bits)) & maxv)
    return out


def is_valid_bech32_address(addr: str) -> bool:
    """Mainnet bech32: hrp ``bc``, valid charset, BIP-173 checksum."""
    if addr != addr.lower() and addr != addr.upper():
        return False  # mixed case is disallowed
    s = addr.lower()
    pos = s.rfind("1")
    if pos < 1 or pos + 7 > len(s) or len(s) > 90:
        return False
    hrp, data_part = s[:pos], s[pos + 1:]
    if hrp != "bc":
        return False
    try:
        data = [_BECH32_INDEX[c] for c in data_part]
    except KeyError:
        return False
    if _bech32_polymod(_bech32_hrp_expand(hrp) + data) != 1:
        return False
    if not data or data[0] > 16:
        return False  # witness version
    return True


# ---------------------------------------------------------------------------
# Hex account addresses with mixed-case checksum (EIP-55 style)
# ---------------------------------------------------------------------------

def eth_checksum_encode(hex40: str) -> str:
    """Apply the mixed-case checksum to a bare 40-hex-digit address body."""
    body = hex40.lower()
    digest = keccak256(body.encode("ascii")).hex()
    out = []
    for i, c in enumerate(body):
        if c in "abcdef" and int(digest[i], 16) >= 8:
            out.append(c.upper())
        else:
            out.append(c)
    return "0x" + "".join(out)


def is_valid_eth_address(addr: str) -> bool:
    """0x + 40 hex; single-case accepted as-is, mixed case must pass the checksum."""
    if len(addr) != 42 or not addr.startswith("0x"):
        return False
    body = addr[2:]
    if any(c not in "0123456789abcdefABCDEF" for c in body):
        return False
    letters = [c for c in body if c.isalpha()]
    if not letters or all(c.islower() for c in letters) or all(c.isupper() for c in letters):
        return True
    return eth_checksum_encode(body) == addr


# ---------------------------------------------------------------------------
# Generators (for fixtures, simulation, and round-trip tests)
# ---------------------------------------------------------------------------

def random_base58_address(rng: SplitMix64) -> str:
    version = 0x00 if rng.chance(0.5) else 0x05
    return base58check_encode(version, rng.bytes(20))


def random_bech32_address(rng: SplitMix64) -> str:
    program = rng.bytes(20)  # witness v0 keyhash length
    return bech32_encode("bc", [0] + convertbits(program, 8, 5))


def random_eth_address(rng: SplitMix64) -> str:
    while True:
        addr = eth_checksum_encode(rng.bytes(20).hex())
        letters = [c for c in addr[2:] if c.isalpha()]
        # keep only mixed-case outputs so the checksum is actually load-bearing
        if any(c.isupper() for c in letters) and any(c.islower() for c in letters):
            return addr
