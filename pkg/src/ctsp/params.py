"""BRKGA configuration, bundled presets and the ``key = value`` file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

VARIANTS = ("R", "R-S", "R-LS", "R-S-LS")
SHAKE_TYPES = ("CHANGE", "SWAP")
INJECTIONS = ("CB", "OB", "BMS", "BI")


class ParamsError(ValueError):
    pass


@dataclass(frozen=True)
class BrkgaParams:
    variant: str = "R-S-LS"
    p: int = 185
    p_e: float = 0.43
    p_m: float = 0.24
    rho_e: float = 0.78
    alpha: float = 0.01
    lambda_ws: float = 0.22
    n_msi: int = 602
    n_nimp: int = 956
    R: int = 154
    Rstar_mult: int = 2
    Rstarstar_mult: int = 9
    s_type: str = "SWAP"
    gamma_weak: str = "OB"
    gamma_strong: str = "OB"
    gamma_reset: str = "OB"
    b: int = 9
    lambda_pLS: float = 0.21
    r_pLS: int = 7
    r_iLS: int = 0  # 0 means n

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ParamsError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.s_type not in SHAKE_TYPES:
            raise ParamsError(f"s_type must be one of {SHAKE_TYPES}, got {self.s_type!r}")
        for name in ("gamma_weak", "gamma_strong", "gamma_reset"):
            if getattr(self, name) not in INJECTIONS:
                raise ParamsError(f"{name} must be one of {INJECTIONS}, got {getattr(self, name)!r}")
        if self.p < 2:
            raise ParamsError(f"population size must be >= 2, got {self.p}")
        if not (0 < self.p_e < 1 and 0 <= self.p_m < 1):
            raise ParamsError("p_e must be in (0, 1) and p_m in [0, 1)")
        if self.elite_size + self.mutant_size >= self.p:
            raise ParamsError("elite plus mutant sets leave no room for offspring")
        if not 0 <= self.rho_e <= 1 or not 0 <= self.alpha <= 1 or not 0 <= self.lambda_ws <= 1:
            raise ParamsError("rho_e, alpha and lambda_ws must lie in [0, 1]")
        if min(self.n_msi, self.b, self.r_iLS) < 0 or min(self.n_nimp, self.R, self.r_pLS) < 1:
            raise ParamsError("counts must be non-negative and periods/radii positive")
        if not 1 <= self.Rstar_mult < self.Rstarstar_mult:
            raise ParamsError("need 1 <= Rstar_mult < Rstarstar_mult")

    @property
    def has_shake(self) -> bool:
        return "-S" in self.variant

    @property
    def has_ls(self) -> bool:
        return self.variant.endswith("LS")

    @property
    def elite_size(self) -> int:
        return max(1, int(self.p_e * self.p))

    @property
    def mutant_size(self) -> int:
        return int(self.p_m * self.p)

    def with_overrides(self, overrides: dict[str, str]) -> BrkgaParams:
        return dataclasses.replace(self, **{k: _convert(k, v) for k, v in overrides.items()})


_FIELDS = {f.name: f for f in dataclasses.fields(BrkgaParams)}


def _convert(key: str, raw):
    if key not in _FIELDS:
        raise ParamsError(f"unknown parameter {key!r}")
    kind = _FIELDS[key].type
    if not isinstance(raw, str):
        return raw
    raw = raw.strip()
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ParamsError(f"{key}: cannot read {raw!r} as {kind}") from None
    return raw.upper()


def normalize_variant(name: str) -> str:
    v = name.strip().upper()
    if v.startswith("BRKGA-"):
        v = v[len("BRKGA-"):]
    if v not in VARIANTS:
        raise ParamsError(f"unknown variant {name!r}; expected one of {[x.lower() for x in VARIANTS]}")
    return v


def parse_params_text(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamsError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ParamsError(f"line {lineno}: unknown parameter {key!r}")
        out[key] = value
    return out


def params_from_text(text: str, base: BrkgaParams | None = None) -> BrkgaParams:
    values = parse_params_text(text)
    if base is None:
        base = preset(values["variant"]) if "variant" in values else BrkgaParams()
    return base.with_overrides(values)


def load_params(path: str | Path, base: BrkgaParams | None = None) -> BrkgaParams:
    return params_from_text(Path(path).read_text(encoding="utf-8"), base)


def dump_params(params: BrkgaParams) -> str:
    return "".join(f"{f} = {getattr(params, f)}\n" for f in _FIELDS)


def preset(variant: str) -> BrkgaParams:
    v = normalize_variant(variant)
    text = resources.files("ctsp").joinpath("presets").joinpath(f"{v.lower()}.params").read_text(encoding="utf-8")
    return BrkgaParams().with_overrides(parse_params_text(text))
