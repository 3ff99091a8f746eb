"""Line-oriented ``key=value`` run configuration.

Example::

    # baseline game at the reference parameter point
    game=1
    d=8
    a=3
    alpha=2
    beta=4
    payment=fixed:0.5
    n=10000

Unknown keys are rejected with the line number; '#' starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dynamics import (
    EssCooperatorsPayment,
    EssReputersPayment,
    EvolveConfig,
    FixedPayment,
    PaymentPolicy,
)
from .errors import ParseError, ValidationError
from .game import GameParams, GameVariant, PopulationState, validate_params
from .errors import ConstraintViolation

_SWEEP_PARAMS = ("d", "a", "alpha", "beta", "p")

_DEFAULTS = {
    "seed": 0,
    "mutation": 0.0,
    "tol": 1e-3,
    "rounds_max": 20000,
    "init_r": 1.0 / 3.0,
    "init_c": 1.0 / 3.0,
    "init_d": 1.0 / 3.0,
}

_FLOAT_KEYS = {
    "d", "a", "alpha", "beta", "init_r", "init_c", "init_d",
    "mutation", "tol", "sweep_from", "sweep_to",
}
_INT_KEYS = {"game", "n", "rounds_max", "seed", "sweep_steps"}
_STR_KEYS = {"payment", "sweep_param"}
_KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS

_REQUIRED = ("game", "d", "a", "alpha", "beta", "payment", "n")


@dataclass(frozen=True)
class RunConfig:
    variant: GameVariant
    params: GameParams
    policy: PaymentPolicy
    init: PopulationState
    rounds_max: int = 20000
    seed: int = 0
    mutation: float = 0.0
    tol: float = 1e-3
    sweep_param: str | None = None
    sweep_from: float = 0.0
    sweep_to: float = 0.0
    sweep_steps: int = 0

    def evolve_config(self, seed: int | None = None) -> EvolveConfig:
        return EvolveConfig(
            variant=self.variant,
            params=self.params,
            policy=self.policy,
            init=self.init,
            rounds_max=self.rounds_max,
            mutation_rate=self.mutation,
            convergence_tol=self.tol,
            seed=self.seed if seed is None else seed,
        )


def _parse_payment(raw: str) -> PaymentPolicy:
    kind, sep, arg = raw.partition(":")
    if not sep:
        raise ValidationError("payment", f"expected '<kind>:<value>', got {raw!r}")
    try:
        value = float(arg)
    except ValueError:
        raise ValidationError("payment", f"bad numeric value {arg!r}") from None
    try:
        if kind == "fixed":
            return FixedPayment(value)
        if kind == "ess-coop":
            return EssCooperatorsPayment(value)
        if kind == "ess-rep":
            return EssReputersPayment(value)
    except ValueError as exc:
        raise ValidationError("payment", str(exc)) from None
    raise ValidationError("payment", f"unknown payment kind {kind!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config file body."""
    raw: dict[str, object] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise ParseError(line_no, f"expected key=value, got {line!r}")
        if key not in _KNOWN_KEYS:
            raise ParseError(line_no, f"unknown key {key!r}")
        if key in raw:
            raise ParseError(line_no, f"duplicate key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                raw[key] = float(value)
            elif key in _INT_KEYS:
                raw[key] = int(value)
            else:
                raw[key] = value
        except ValueError:
            raise ParseError(line_no, f"bad value {value!r} for {key!r}") from None

    for key in _REQUIRED:
        if key not in raw and key != "payment":
            raise ValidationError(key, "missing required key")
    if "payment" not in raw:
        raise ValidationError("payment", "missing required key")
    for key, default in _DEFAULTS.items():
        raw.setdefault(key, default)

    if raw["game"] not in (1, 2, 3):
        raise ValidationError("game", f"must be 1, 2, or 3, got {raw['game']}")
    variant = GameVariant(raw["game"])
    policy = _parse_payment(raw["payment"])

    init_sum = raw["init_r"] + raw["init_c"] + raw["init_d"]
    if abs(init_sum - 1.0) > 1e-6:
        raise ValidationError("init_r", f"init fractions sum to {init_sum}, not 1")
    scale = 1.0 / init_sum
    init = PopulationState(
        raw["init_r"] * scale, raw["init_c"] * scale, raw["init_d"] * scale
    )

    params = GameParams(
        d=raw["d"],
        a=raw["a"],
        alpha=raw["alpha"],
        beta=raw["beta"],
        p=policy.p if isinstance(policy, FixedPayment) else 0.0,
        n=raw["n"],
    )
    try:
        validate_params(params)
    except ConstraintViolation as exc:
        raise ValidationError("params", str(exc)) from None

    sweep_param = raw.get("sweep_param")
    if sweep_param is not None:
        if sweep_param not in _SWEEP_PARAMS:
            raise ValidationError(
                "sweep_param", f"must be one of {_SWEEP_PARAMS}, got {sweep_param!r}"
            )
        for key in ("sweep_from", "sweep_to", "sweep_steps"):
            if key not in raw or (key == "sweep_steps" and raw[key] == 0):
                raise ValidationError(key, "required when sweep_param is set")
        if raw["sweep_steps"] < 2:
            raise ValidationError("sweep_steps", "must be >= 2")
        if sweep_param == "p" and not isinstance(policy, FixedPayment):
            raise ValidationError(
                "sweep_param", "sweeping p requires a fixed payment policy"
            )

    if raw["rounds_max"] < 1:
        raise ValidationError("rounds_max", "must be >= 1")
    if not 0.0 <= raw["mutation"] < 1.0:
        raise ValidationError("mutation", "must be in [0, 1)")
    if raw["tol"] <= 0:
        raise ValidationError("tol", "must be positive")

    return RunConfig(
        variant=variant,
        params=params,
        policy=policy,
        init=init,
        rounds_max=raw["rounds_max"],
        seed=raw["seed"],
        mutation=raw["mutation"],
        tol=raw["tol"],
        sweep_param=sweep_param,
        sweep_from=raw.get("sweep_from", 0.0),
        sweep_to=raw.get("sweep_to", 0.0),
        sweep_steps=raw.get("sweep_steps", 0),
    )


def serialize_config(config: RunConfig) -> str:
    """Inverse of parse_config for valid configs (round-trip stable)."""
    policy = config.policy
    if isinstance(policy, FixedPayment):
        payment = f"fixed:{policy.p!r}"
    elif isinstance(policy, EssCooperatorsPayment):
        payment = f"ess-coop:{policy.epsilon!r}"
    else:
        payment = f"ess-rep:{policy.epsilon!r}"
    lines = [
        f"game={config.variant.value}",
        f"d={config.params.d!r}",
        f"a={config.params.a!r}",
        f"alpha={config.params.alpha!r}",
        f"beta={config.params.beta!r}",
        f"payment={payment}",
        f"n={config.params.n}",
        f"rounds_max={config.rounds_max}",
        f"seed={config.seed}",
        f"init_r={config.init.x_r!r}",
        f"init_c={config.init.x_c!r}",
        f"init_d={config.init.x_d!r}",
        f"mutation={config.mutation!r}",
        f"tol={config.tol!r}",
    ]
    if config.sweep_param is not None:
        lines += [
            f"sweep_param={config.sweep_param}",
            f"sweep_from={config.sweep_from!r}",
            f"sweep_to={config.sweep_to!r}",
            f"sweep_steps={config.sweep_steps}",
        ]
    return "\n".join(lines) + "\n"
