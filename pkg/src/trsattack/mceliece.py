"""McEliece-style encryption over twisted Reed-Solomon codes.

Key generation draws pairwise-distinct base-field locators, twist
coefficients eta_i from F_{q_i} outside F_{q_(i-1)}, and a uniform
invertible scrambler S; the public key is S times the twisted generator.
Encryption adds an error of weight exactly floor((n-k)/2); decryption runs
the guess-based twisted decoder and unscrambles.

Keys and ciphertexts serialize to line-oriented text with fixed-width
lowercase hex elements; parsing is strict and any deviation raises
FormatError.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from . import rs, trs
from .linalg import Mat
from .rs import DecodingFailure, Locators
from .trs import TrsKey, TrsParams


class DecryptionFailure(Exception):
    """The ciphertext does not decode under this private key."""


class FormatError(Exception):
    """A key/ciphertext/message file deviates from the fixed text format."""


@dataclass
class PublicKey:
    params: TrsParams
    G: Mat


@dataclass
class PrivateKey:
    params: TrsParams
    S: Mat
    key: TrsKey
    _S_inv: Mat | None = field(default=None, repr=False)

    def S_inv(self) -> Mat:
        if self._S_inv is None:
            ident = la.identity(self.S.tower, self.S.level, self.params.k)
            self._S_inv = la.solve_left(self.S, ident)
        return self._S_inv


@dataclass
class Ciphertext:
    params: TrsParams
    y: np.ndarray


def keygen(params: TrsParams, rng) -> tuple[PublicKey, PrivateKey]:
    """Draws (alpha, eta, S) and publishes S @ G_trs.

    rng draw order is fixed (locator shuffle, then eta_1..eta_l, then S
    entries row-major with whole-matrix retry on singularity), so a seed
    reproduces keys bit-identically.
    """
    if not params.strict:
        raise trs.ParameterError("key generation requires strict parameters")
    tower = params.tower()
    pool = list(tower.subfield_elements(0))
    for i in range(params.n):
        j = rng.randrange(i, len(pool))
        pool[i], pool[j] = pool[j], pool[i]
    locs = Locators(tower, pool[: params.n])
    eta = tuple(tower.sample_eta(i, rng) for i in range(1, params.l + 1))
    key = TrsKey(params, locs, eta)
    k = params.k
    while True:
        S = la.from_rows(tower, tower.levels,
                         [[rng.getrandbits(tower.m) for _ in range(k)]
                          for _ in range(k)])
        if la.rank(S) == k:
            break
    G_pub = la.matmul(S, trs.trs_generator(key))
    return PublicKey(params, G_pub), PrivateKey(params, S, key)


def encrypt(m, pub: PublicKey, rng) -> Ciphertext:
    """y = m G_pub + e with w_H(e) exactly floor((n-k)/2)."""
    p = pub.params
    if len(m) != p.k:
        raise ValueError(f"message must have {p.k} elements")
    tower = pub.G.tower
    mv = la.from_rows(tower, pub.G.level, [list(m)])
    y = la.matmul(mv, pub.G).a[0].copy()
    pos = list(range(p.n))
    for i in range(p.radius):
        j = rng.randrange(i, p.n)
        pos[i], pos[j] = pos[j], pos[i]
    for i in range(p.radius):
        v = rng.randrange(1, tower.q)
        y[pos[i]] = int(y[pos[i]]) ^ v if y.dtype == object else \
            y[pos[i]] ^ np.uint64(v)
    return Ciphertext(p, y)


def decrypt(ct: Ciphertext, priv: PrivateKey) -> list[int]:
    """Recovers m from y = m G_pub + e; fails on malformed ciphertexts."""
    p = priv.params
    if ct.y.shape != (p.n,):
        raise ValueError("ciphertext length mismatch")
    try:
        m_tilde = trs.trs_decode(ct.y, priv.key)
    except DecodingFailure as exc:
        raise DecryptionFailure(str(exc)) from exc
    tower = priv.key.tower
    mt = la.from_rows(tower, priv.S.level, [m_tilde])
    return [int(x) for x in la.matmul(mt, priv.S_inv()).a[0]]


# ----------------------------------------------------------------------
# serialization

_MAGIC = "TRS-MCELIECE v1"
_PARAM_RE = re.compile(r"^q0=(\d+) n=(\d+) k=(\d+) l=(\d+)$")


def _params_line(p: TrsParams) -> str:
    return f"q0={p.q0} n={p.n} k={p.k} l={p.l}"


def _row_line(tower, row) -> str:
    return " ".join(tower.encode_el(int(x)) for x in row)


def _parse_row(tower, line: str, count: int) -> list[int]:
    toks = line.split(" ")
    if len(toks) != count or any(not t for t in toks):
        raise FormatError(f"expected {count} elements on line, got {len(toks)}")
    try:
        return [tower.decode_el(t) for t in toks]
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def _read_lines(path: str, kind: str) -> tuple[TrsParams, list[str]]:
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2:
        raise FormatError("file too short")
    if lines[0] != f"{_MAGIC} {kind}":
        raise FormatError(f"bad header {lines[0]!r}")
    m = _PARAM_RE.match(lines[1])
    if not m:
        raise FormatError(f"bad parameter line {lines[1]!r}")
    q0, n, k, l = (int(g) for g in m.groups())
    res = trs.validate_params(q0, n, k, l)
    if isinstance(res, list):
        raise FormatError("invalid parameters in file: " + "; ".join(res))
    return res, lines[2:]


def write_public(path: str, pub: PublicKey) -> None:
    tower = pub.G.tower
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_MAGIC} public\n{_params_line(pub.params)}\n")
        for row in pub.G.a:
            fh.write(_row_line(tower, row) + "\n")


def read_public(path: str) -> PublicKey:
    p, body = _read_lines(path, "public")
    if len(body) != p.k:
        raise FormatError(f"expected {p.k} matrix rows, got {len(body)}")
    tower = p.tower()
    rows = [_parse_row(tower, ln, p.n) for ln in body]
    return PublicKey(p, la.from_rows(tower, tower.levels, rows))


def write_private(path: str, priv: PrivateKey) -> None:
    tower = priv.key.tower
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_MAGIC} private\n{_params_line(priv.params)}\n")
        for row in priv.S.a:
            fh.write(_row_line(tower, row) + "\n")
        fh.write(_row_line(tower, priv.key.locs.alpha) + "\n")
        fh.write(_row_line(tower, priv.key.eta) + "\n")


def read_private(path: str) -> PrivateKey:
    p, body = _read_lines(path, "private")
    if len(body) != p.k + 2:
        raise FormatError(f"expected {p.k + 2} body lines, got {len(body)}")
    tower = p.tower()
    rows = [_parse_row(tower, ln, p.k) for ln in body[: p.k]]
    alpha = _parse_row(tower, body[p.k], p.n)
    eta = _parse_row(tower, body[p.k + 1], p.l)
    S = la.from_rows(tower, tower.levels, rows)
    if la.rank(S) != p.k:
        raise FormatError("scrambler matrix is singular")
    try:
        key = TrsKey(p, Locators(tower, alpha), tuple(eta))
    except (ValueError, trs.ParameterError) as exc:
        raise FormatError(str(exc)) from exc
    return PrivateKey(p, S, key)


def write_ciphertext(path: str, ct: Ciphertext) -> None:
    tower = ct.params.tower()
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_MAGIC} ciphertext\n{_params_line(ct.params)}\n")
        fh.write(_row_line(tower, ct.y) + "\n")


def read_ciphertext(path: str) -> Ciphertext:
    p, body = _read_lines(path, "ciphertext")
    if len(body) != 1:
        raise FormatError(f"expected 1 body line, got {len(body)}")
    tower = p.tower()
    y = _parse_row(tower, body[0], p.n)
    dt = np.uint64 if tower.m <= 63 else object
    return Ciphertext(p, np.array(y, dtype=dt))


def write_message(path: str, params: TrsParams, m) -> None:
    tower = params.tower()
    if len(m) != params.k:
        raise ValueError(f"message must have {params.k} elements")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(_row_line(tower, m) + "\n")


def read_message(path: str, params: TrsParams) -> list[int]:
    tower = params.tower()
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 1:
        raise FormatError("message file must hold exactly one line")
    return _parse_row(tower, lines[0], params.k)
