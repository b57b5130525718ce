"""
Source description strings.

    powersum: 1*u^3 + 0.5*u^2     (terms a*u^q, a*u, u^q or u)
    eigscaled: c=3                (needs p and lambda_{1,p} at parse time)
    table: path.csv               (columns u,f)
"""
import re
from typing import Optional

from app.domain.errors import ConfigError
from app.sources.base import SourceTerm
from app.sources.power import EigenScaled, NoReaction, PowerSum
from app.sources.tabulated import Tabulated

SPEC_PATTERN = re.compile(r"^\s*(powersum|eigscaled|table)\s*:\s*(.*?)\s*$")
TERM_PATTERN = re.compile(
    r"^(?:(?P<a>[0-9.eE+\-]+)\s*\*\s*)?u(?:\s*\^\s*(?P<q>[0-9.eE+\-]+))?$"
)
EIGSCALED_PATTERN = re.compile(r"^c\s*=\s*(?P<c>[0-9.eE+\-]+)$")


def _number(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"Could not read {what} from {text!r}")


def _split_terms(body: str):
    # '+' separates terms, except inside exponents like 1e+3
    return [t.strip() for t in re.split(r"(?<![eE])\+", body) if t.strip()]


def parse_powersum(body: str) -> SourceTerm:
    if body.strip() == "0":
        return NoReaction()
    terms = []
    for raw in _split_terms(body):
        m = TERM_PATTERN.match(raw.replace(" ", ""))
        if not m:
            raise ConfigError(f"Bad powersum term {raw!r}; expected a*u^q")
        a = _number(m.group("a"), "coefficient") if m.group("a") else 1.0
        q = _number(m.group("q"), "exponent") if m.group("q") else 1.0
        terms.append((a, q))
    return PowerSum(terms)


def needs_eigenvalue(spec: str) -> bool:
    m = SPEC_PATTERN.match(spec or "")
    return bool(m) and m.group(1) == "eigscaled"


def parse_source(spec: str, p: Optional[float] = None, lambda1p: Optional[float] = None) -> SourceTerm:
    m = SPEC_PATTERN.match(spec or "")
    if not m:
        raise ConfigError(f"Unknown source spec {spec!r}; use 'powersum: ...', 'eigscaled: c=...' or 'table: path'")
    kind, body = m.groups()
    if not body:
        raise ConfigError(f"Source spec {spec!r} has an empty body")

    if kind == "powersum":
        return parse_powersum(body)
    if kind == "eigscaled":
        em = EIGSCALED_PATTERN.match(body.replace(" ", ""))
        if not em:
            raise ConfigError(f"Bad eigscaled spec {body!r}; expected c=<value>")
        if p is None or lambda1p is None:
            raise ConfigError("eigscaled sources need p and a computed lambda_{1,p}")
        return EigenScaled(_number(em.group("c"), "c"), p, lambda1p)
    return Tabulated.from_csv(body)
