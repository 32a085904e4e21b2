"""Phenomenological damage models for four fiber-optic attenuator classes.

Each class reacts differently to high-power c.w. exposure:

* manual VOA  -- survives everything up to 9 W unchanged,
* fixed       -- temporary thermal drop in attenuation, catastrophic
                 blockage above its failure threshold,
* MEMS VOA    -- permanent drop over the high-attenuation band, or
                 catastrophic failure (>70 dB),
* VDMC VOA    -- localized permanent dip at the exposed disk position,
                 gated by a cumulative power/time law, never catastrophic.

Per-sample thresholds and damage magnitudes are drawn from seeded
distributions calibrated against measured sample populations, so large
Monte Carlo runs reproduce the observed success/failure fractions while
any single seeded sample behaves like one lab specimen.
"""

from __future__ import annotations

import copy
import enum
import json
import math
from dataclasses import dataclass, field, asdict

import numpy as np

from .fiber import watts_to_dbm


class AttenuatorClass(enum.Enum):
    MANUAL_VOA = "manual-voa"
    FIXED = "fixed"
    MEMS_VOA = "mems-voa"
    VDMC_VOA = "vdmc-voa"


class OutcomeKind(enum.Enum):
    NO_CHANGE = "NoChange"
    TEMPORARY_DROP = "TemporaryDrop"
    PERMANENT_DROP = "PermanentDrop"
    CRITICAL_FAILURE = "CriticalFailure"


@dataclass(frozen=True)
class ExposureOutcome:
    kind: OutcomeKind
    delta_db: float = 0.0

    def __post_init__(self):
        if self.kind in (OutcomeKind.TEMPORARY_DROP, OutcomeKind.PERMANENT_DROP):
            if self.delta_db >= 0:
                raise ValueError("drop outcomes require delta_db < 0")
        if self.kind is OutcomeKind.CRITICAL_FAILURE and self.delta_db <= 0:
            raise ValueError("critical failure requires delta_db > 0")


@dataclass(frozen=True)
class DamageProfile:
    """Class-level damage statistics a sample population is drawn from."""

    attack_threshold_dbm: float
    failure_threshold_dbm: float
    success_delta_db_mean: float
    success_delta_db_spread: float
    success_probability: float
    failure_probability: float
    permanent: bool
    recovery_tau_s: float = 150.0
    insertion_loss_floor_db: float = 0.0

    def __post_init__(self):
        if self.attack_threshold_dbm > self.failure_threshold_dbm:
            raise ValueError("attack threshold must not exceed failure threshold")
        if self.success_delta_db_spread < 0:
            raise ValueError("success_delta_db_spread must be >= 0")
        for name in ("success_probability", "failure_probability"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0,1], got {p}")
        if self.success_probability + self.failure_probability > 1.0 + 1e-12:
            raise ValueError("success + failure probability must not exceed 1")
        if self.recovery_tau_s < 0:
            raise ValueError("recovery_tau_s must be >= 0")
        if self.insertion_loss_floor_db < 0:
            raise ValueError("insertion_loss_floor_db must be >= 0")


# Calibrated per-class defaults (sample populations: 12 fixed, 13 MEMS,
# 25 VDMC disk points, 2 manual).
DEFAULT_PROFILES: dict[AttenuatorClass, DamageProfile] = {
    AttenuatorClass.MANUAL_VOA: DamageProfile(
        attack_threshold_dbm=math.inf,
        failure_threshold_dbm=math.inf,
        success_delta_db_mean=0.0,
        success_delta_db_spread=0.0,
        success_probability=0.0,
        failure_probability=0.0,
        permanent=False,
    ),
    AttenuatorClass.FIXED: DamageProfile(
        attack_threshold_dbm=34.0,
        failure_threshold_dbm=37.2,
        success_delta_db_mean=-1.37,
        success_delta_db_spread=0.15,
        success_probability=4 / 12,
        failure_probability=6 / 12,
        permanent=False,
        recovery_tau_s=150.0,
    ),
    AttenuatorClass.MEMS_VOA: DamageProfile(
        attack_threshold_dbm=36.2,
        failure_threshold_dbm=36.6,
        success_delta_db_mean=-5.34,
        success_delta_db_spread=2.5,
        success_probability=8 / 13,
        failure_probability=4 / 13,
        permanent=True,
    ),
    AttenuatorClass.VDMC_VOA: DamageProfile(
        attack_threshold_dbm=34.5,
        failure_threshold_dbm=36.5,
        success_delta_db_mean=-9.59,
        success_delta_db_spread=3.5,
        success_probability=18 / 25,
        failure_probability=0.0,
        permanent=True,
        insertion_loss_floor_db=1.7,
    ),
}

# Per-sample thresholds scatter uniformly within +-1 dBm of the class mean.
THRESHOLD_DISPERSION_DBM = 1.0

# Control ranges, dB of attenuation.
SETPOINT_RANGES = {
    AttenuatorClass.MANUAL_VOA: (1.5, 80.0),
    AttenuatorClass.FIXED: (25.0, 25.0),
    AttenuatorClass.MEMS_VOA: (1.0, 34.0),
    AttenuatorClass.VDMC_VOA: (0.0, 80.0),
}

# MEMS voltage-attenuation curve parameters.
MEMS_V_MAX = 15.0
MEMS_A_MIN = 1.0
MEMS_A_MAX = 34.0
# Permanent drop is concentrated in the top 30% of the attenuation range,
# tapering linearly to zero below it.
MEMS_BAND_FRACTION = 0.30
MEMS_TAPER_FRACTION = 0.15
MEMS_BLOCKED_DB = 75.0

# VDMC cumulative-exposure attack law: (min power W, required cumulative s).
# Offsets are in dB relative to the class-mean attack threshold so that the
# per-sample threshold dispersion shifts the whole law together.
VDMC_TIER_OFFSETS_DB = (-1.5, -1.1, 0.0)
VDMC_TIER_TIMES_S = (200.0, 40.0, 10.0)
VDMC_DIP_HALF_WIDTH_DB = 0.5
VDMC_DEEPEN_FACTOR = 0.3

# Fixed-attenuator thermal drop scales with power relative to the class
# attack threshold, saturating at 1.6x (strong heating regime).
FIXED_THERMAL_POWER_CAP = 1.6


class Fate(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"
    RESISTANT = "resistant"


def mems_voltage_to_attenuation(v: float) -> float:
    """Monotone voltage-to-attenuation curve of an undamaged MEMS VOA."""
    if not 0.0 <= v <= MEMS_V_MAX:
        raise ValueError(f"MEMS control voltage out of range: {v}")
    return MEMS_A_MIN + (MEMS_A_MAX - MEMS_A_MIN) * math.sqrt(v / MEMS_V_MAX)


def mems_attenuation_to_voltage(a_db: float) -> float:
    if not MEMS_A_MIN <= a_db <= MEMS_A_MAX:
        raise ValueError(f"MEMS attenuation setpoint out of range: {a_db}")
    return MEMS_V_MAX * ((a_db - MEMS_A_MIN) / (MEMS_A_MAX - MEMS_A_MIN)) ** 2


def _truncated_normal_below(rng, mean: float, spread: float, upper: float) -> float:
    """Normal draw conditioned on being <= upper (rejection with clamp)."""
    if spread == 0:
        return min(mean, upper)
    for _ in range(200):
        x = rng.normal(mean, spread)
        if x <= upper:
            return x
    return upper


def _draw_fate(u: float, profile: DamageProfile) -> Fate:
    if u < profile.success_probability:
        return Fate.SUCCESS
    if u < profile.success_probability + profile.failure_probability:
        return Fate.FAILURE
    return Fate.RESISTANT


@dataclass
class AttenuatorState:
    """One attenuator specimen under attack. Mutate by returning new state."""

    klass: AttenuatorClass
    profile: DamageProfile
    seed: int
    setpoint_db: float
    control: float                      # native control coordinate (V for MEMS, dB otherwise)
    sampled_attack_threshold_dbm: float
    sampled_failure_threshold_dbm: float
    fate: Fate
    thermal_offset_db: float = 0.0
    destroyed: bool = False
    blocked_db: float = 0.0
    clock_s: float = 0.0
    # Fixed-class draws
    fixed_thermal_base_db: float = 0.0
    fixed_failure_increase_db: float = 0.0
    # MEMS-class draws/state
    mems_depth_db: float = 0.0
    mems_damage: dict | None = None
    # VDMC per-point exposure bookkeeping
    vdmc_points: dict = field(default_factory=dict)

    def copy(self) -> "AttenuatorState":
        new = copy.copy(self)
        new.mems_damage = copy.deepcopy(self.mems_damage)
        new.vdmc_points = copy.deepcopy(self.vdmc_points)
        return new


def new_attenuator(
    klass: AttenuatorClass,
    profile: DamageProfile | None = None,
    setpoint_db: float | None = None,
    seed: int = 0,
) -> AttenuatorState:
    """Instantiate a seeded attenuator specimen at the given setpoint."""
    if profile is None:
        profile = DEFAULT_PROFILES[klass]
    lo, hi = SETPOINT_RANGES[klass]
    if setpoint_db is None:
        setpoint_db = lo if klass is AttenuatorClass.FIXED else (lo + hi) / 2
    if not lo <= setpoint_db <= hi:
        raise ValueError(
            f"setpoint {setpoint_db} dB out of range [{lo}, {hi}] for {klass.value}"
        )

    rng = np.random.default_rng(seed)
    if math.isfinite(profile.attack_threshold_dbm):
        thr_a = profile.attack_threshold_dbm + rng.uniform(
            -THRESHOLD_DISPERSION_DBM, THRESHOLD_DISPERSION_DBM
        )
        thr_f = profile.failure_threshold_dbm + rng.uniform(
            -THRESHOLD_DISPERSION_DBM, THRESHOLD_DISPERSION_DBM
        )
        thr_f = max(thr_f, thr_a)
    else:
        thr_a = thr_f = math.inf
        rng.uniform(-1, 1)  # keep the draw sequence fixed across classes
        rng.uniform(-1, 1)
    fate = _draw_fate(rng.random(), profile)

    state = AttenuatorState(
        klass=klass,
        profile=profile,
        seed=int(seed),
        setpoint_db=float(setpoint_db),
        control=float(setpoint_db),
        sampled_attack_threshold_dbm=thr_a,
        sampled_failure_threshold_dbm=thr_f,
        fate=fate,
    )

    if klass is AttenuatorClass.FIXED:
        base_mag = abs(profile.success_delta_db_mean)
        if fate is Fate.SUCCESS:
            state.fixed_thermal_base_db = float(
                np.clip(
                    rng.normal(base_mag, profile.success_delta_db_spread),
                    base_mag - 1.8 * profile.success_delta_db_spread,
                    base_mag + 1.2 * profile.success_delta_db_spread,
                )
            )
        else:
            # below-detection thermal response of non-susceptible samples
            state.fixed_thermal_base_db = rng.uniform(0.1, 0.3)
        state.fixed_failure_increase_db = rng.uniform(20.0, 35.0)
    elif klass is AttenuatorClass.MEMS_VOA:
        state.control = mems_attenuation_to_voltage(setpoint_db)
        state.mems_depth_db = _truncated_normal_below(
            rng, profile.success_delta_db_mean, profile.success_delta_db_spread, -1.0
        )
    return state


def _point_key(setting_db: float) -> int:
    return int(round(setting_db * 1000.0))


def _vdmc_point_rng(state: AttenuatorState, key: int):
    return np.random.default_rng([state.seed, abs(key), 0x5D])


def _vdmc_dip_db(point: dict, setting_db: float) -> float:
    """Triangular (possibly skewed) dip contribution at a query setting."""
    if not point.get("damaged"):
        return 0.0
    x = setting_db - point["center_db"]
    hw = point["hw_hi_db"] if x >= 0 else point["hw_lo_db"]
    w = max(1.0 - abs(x) / hw, 0.0)
    return point["depth_db"] * w


def attenuation(state: AttenuatorState, control: float | None = None) -> float:
    """Reported attenuation (dB) at a control setting, default the setpoint."""
    if control is None:
        control = state.control
    profile = state.profile

    if state.klass is AttenuatorClass.MANUAL_VOA:
        lo, hi = SETPOINT_RANGES[state.klass]
        if not lo <= control <= hi:
            raise ValueError(f"manual VOA setting out of range: {control}")
        return control

    if state.klass is AttenuatorClass.FIXED:
        if state.destroyed:
            return state.blocked_db
        return max(
            state.setpoint_db + state.thermal_offset_db,
            profile.insertion_loss_floor_db,
        )

    if state.klass is AttenuatorClass.MEMS_VOA:
        if state.destroyed:
            return state.blocked_db
        baseline = mems_voltage_to_attenuation(control)
        return max(
            baseline + _mems_band_offset(state, baseline) + state.thermal_offset_db,
            profile.insertion_loss_floor_db,
        )

    # VDMC: baseline is the calibrated identity curve plus any local dips.
    lo, hi = SETPOINT_RANGES[state.klass]
    if not lo <= control <= hi:
        raise ValueError(f"VDMC setting out of range: {control}")
    value = control + state.thermal_offset_db
    for point in state.vdmc_points.values():
        value += _vdmc_dip_db(point, control)
    return max(value, profile.insertion_loss_floor_db)


def _mems_band_offset(state: AttenuatorState, baseline_db: float) -> float:
    dmg = state.mems_damage
    if dmg is None:
        return 0.0
    span = MEMS_A_MAX - MEMS_A_MIN
    band_lo = MEMS_A_MIN + (1.0 - MEMS_BAND_FRACTION) * span
    taper = MEMS_TAPER_FRACTION * span

    def weight(a):
        if a >= band_lo:
            return 1.0
        return max((a - (band_lo - taper)) / taper, 0.0)

    w0 = max(weight(dmg["a0_db"]), 0.25)
    return dmg["depth_db"] * min(weight(baseline_db) / w0, 1.0)


def apply_exposure(
    state: AttenuatorState, power_w: float, duration_s: float
) -> tuple[AttenuatorState, ExposureOutcome]:
    """Expose the attenuator to c.w. power for a duration; returns new state.

    All randomness was pre-drawn at construction, so trajectories are fully
    determined by (class, profile, setpoint, seed) and the exposure sequence.
    """
    if state.destroyed:
        raise ValueError("cannot expose a destroyed attenuator")
    if power_w < 0:
        raise ValueError(f"power_w must be >= 0, got {power_w}")
    if duration_s <= 0:
        raise ValueError(f"duration_s must be > 0, got {duration_s}")

    new = state.copy()
    new.clock_s += duration_s
    if power_w == 0.0:
        return new, ExposureOutcome(OutcomeKind.NO_CHANGE)
    p_dbm = watts_to_dbm(power_w)

    if state.klass is AttenuatorClass.MANUAL_VOA:
        return new, ExposureOutcome(OutcomeKind.NO_CHANGE)

    if state.klass is AttenuatorClass.FIXED:
        return _expose_fixed(new, power_w, p_dbm)

    if state.klass is AttenuatorClass.MEMS_VOA:
        return _expose_mems(new, p_dbm)

    return _expose_vdmc(new, power_w, p_dbm, duration_s)


def _expose_fixed(new: AttenuatorState, power_w: float, p_dbm: float):
    if new.fate is Fate.FAILURE and p_dbm >= new.sampled_failure_threshold_dbm:
        new.destroyed = True
        new.thermal_offset_db = 0.0
        new.blocked_db = new.setpoint_db + new.fixed_failure_increase_db
        return new, ExposureOutcome(
            OutcomeKind.CRITICAL_FAILURE, new.fixed_failure_increase_db
        )
    if p_dbm >= new.sampled_attack_threshold_dbm:
        p_ref_w = 10.0 ** (new.profile.attack_threshold_dbm / 10.0) / 1000.0
        scale = min(power_w / p_ref_w, FIXED_THERMAL_POWER_CAP)
        drop = new.fixed_thermal_base_db * scale
        new.thermal_offset_db = -drop
        return new, ExposureOutcome(OutcomeKind.TEMPORARY_DROP, -drop)
    return new, ExposureOutcome(OutcomeKind.NO_CHANGE)


def _expose_mems(new: AttenuatorState, p_dbm: float):
    baseline = mems_voltage_to_attenuation(new.control)
    if new.fate is Fate.FAILURE and p_dbm >= new.sampled_failure_threshold_dbm:
        new.destroyed = True
        new.blocked_db = MEMS_BLOCKED_DB
        return new, ExposureOutcome(
            OutcomeKind.CRITICAL_FAILURE, MEMS_BLOCKED_DB - baseline
        )
    if (
        new.fate is Fate.SUCCESS
        and new.mems_damage is None
        and p_dbm >= new.sampled_attack_threshold_dbm
    ):
        new.mems_damage = {"depth_db": new.mems_depth_db, "a0_db": baseline}
        return new, ExposureOutcome(OutcomeKind.PERMANENT_DROP, new.mems_depth_db)
    return new, ExposureOutcome(OutcomeKind.NO_CHANGE)


def _vdmc_required_time_s(p_dbm: float, sampled_thr_dbm: float) -> float:
    """Cumulative exposure needed for damage at this power, inf if below law."""
    req = math.inf
    for off, t_req in zip(VDMC_TIER_OFFSETS_DB, VDMC_TIER_TIMES_S):
        if p_dbm >= sampled_thr_dbm + off:
            req = t_req
    return req


def _expose_vdmc(new: AttenuatorState, power_w: float, p_dbm: float, duration_s: float):
    key = _point_key(new.control)
    point = new.vdmc_points.setdefault(
        key,
        {
            "setting_db": new.control,
            "tier_times_s": [0.0, 0.0, 0.0],
            "damaged": False,
            "max_power_w": 0.0,
            "deepen_count": 0,
        },
    )
    for i, off in enumerate(VDMC_TIER_OFFSETS_DB):
        if p_dbm >= new.sampled_attack_threshold_dbm + off:
            point["tier_times_s"][i] += duration_s

    cleared = any(
        t >= t_req for t, t_req in zip(point["tier_times_s"], VDMC_TIER_TIMES_S)
    )
    if not cleared:
        point["max_power_w"] = max(point["max_power_w"], power_w)
        return new, ExposureOutcome(OutcomeKind.NO_CHANGE)

    rng = _vdmc_point_rng(new, key)
    point_vulnerable = rng.random() < new.profile.success_probability
    optimal = p_dbm >= new.sampled_attack_threshold_dbm

    if not point["damaged"]:
        if not point_vulnerable:
            point["max_power_w"] = max(point["max_power_w"], power_w)
            return new, ExposureOutcome(OutcomeKind.NO_CHANGE)
        depth = _truncated_normal_below(
            rng,
            new.profile.success_delta_db_mean,
            new.profile.success_delta_db_spread,
            -1.0,
        )
        if optimal:
            center, hw_lo, hw_hi = new.control, VDMC_DIP_HALF_WIDTH_DB, VDMC_DIP_HALF_WIDTH_DB
        else:
            # suboptimal (low power, long time): shallower skewed dip with
            # its minimum displaced from the irradiated setting
            depth *= 0.8
            shift = rng.uniform(0.1, 0.3) * (1 if rng.random() < 0.5 else -1)
            center = new.control + shift
            hw_lo, hw_hi = 0.3, 0.7
        point.update(
            damaged=True,
            depth_db=depth,
            center_db=center,
            hw_lo_db=hw_lo,
            hw_hi_db=hw_hi,
            max_power_w=max(point["max_power_w"], power_w),
        )
        delta = _measured_vdmc_delta(new, point)
        if delta >= 0:
            return new, ExposureOutcome(OutcomeKind.NO_CHANGE)
        return new, ExposureOutcome(OutcomeKind.PERMANENT_DROP, delta)

    # repeated exposure at clearly higher power deepens the dip with
    # diminishing returns; damage never self-heals
    if power_w > point["max_power_w"] + 0.4:
        point["deepen_count"] += 1
        extra = point["depth_db"] * VDMC_DEEPEN_FACTOR ** point["deepen_count"]
        before = _measured_vdmc_delta(new, point)
        point["depth_db"] += extra
        point["max_power_w"] = power_w
        delta = _measured_vdmc_delta(new, point) - before
        if delta < 0:
            return new, ExposureOutcome(OutcomeKind.PERMANENT_DROP, delta)
    point["max_power_w"] = max(point["max_power_w"], power_w)
    return new, ExposureOutcome(OutcomeKind.NO_CHANGE)


def _measured_vdmc_delta(state: AttenuatorState, point: dict) -> float:
    setting = point["setting_db"]
    floor = state.profile.insertion_loss_floor_db
    baseline = max(setting, floor)
    return max(setting + _vdmc_dip_db(point, setting), floor) - baseline


def cool_down(state: AttenuatorState, elapsed_s: float) -> AttenuatorState:
    """Exponential decay of the thermal offset; permanent damage untouched."""
    if elapsed_s < 0:
        raise ValueError(f"elapsed_s must be >= 0, got {elapsed_s}")
    new = state.copy()
    new.clock_s += elapsed_s
    tau = state.profile.recovery_tau_s
    if elapsed_s > 0 and tau > 0:
        new.thermal_offset_db = state.thermal_offset_db * math.exp(-elapsed_s / tau)
    elif elapsed_s > 0:
        new.thermal_offset_db = 0.0
    return new


# --- profile config loading -------------------------------------------------

_PROFILE_FIELDS = {
    "attack_threshold_dbm",
    "failure_threshold_dbm",
    "success_delta_db_mean",
    "success_delta_db_spread",
    "success_probability",
    "failure_probability",
    "permanent",
    "recovery_tau_s",
    "insertion_loss_floor_db",
}


class ProfileConfigError(ValueError):
    """Raised when a damage-profile config file violates the schema."""


def profile_to_dict(profile: DamageProfile) -> dict:
    d = asdict(profile)
    for k in ("attack_threshold_dbm", "failure_threshold_dbm"):
        if math.isinf(d[k]):
            d[k] = None
    return d


def profile_from_dict(base: DamageProfile, overrides: dict) -> DamageProfile:
    unknown = set(overrides) - _PROFILE_FIELDS
    if unknown:
        raise ProfileConfigError(f"unknown profile fields: {sorted(unknown)}")
    merged = profile_to_dict(base)
    merged.update(overrides)
    for k in ("attack_threshold_dbm", "failure_threshold_dbm"):
        if merged[k] is None:
            merged[k] = math.inf
    try:
        return DamageProfile(**merged)
    except (TypeError, ValueError) as exc:
        raise ProfileConfigError(str(exc)) from exc


def load_profiles(path: str) -> dict[AttenuatorClass, DamageProfile]:
    """Load per-class profile overrides from a JSON config file.

    Schema: {"profiles": {"<class-name>": {<DamageProfile fields>}}}, where
    class names are the CLI spellings (manual-voa, fixed, mems-voa,
    vdmc-voa). Unlisted classes and fields keep their shipped defaults.
    """
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as exc:
        raise ProfileConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("profiles", {}), dict):
        raise ProfileConfigError('config must be an object with a "profiles" map')
    unknown_top = set(doc) - {"profiles"}
    if unknown_top:
        raise ProfileConfigError(f"unknown top-level keys: {sorted(unknown_top)}")
    profiles = dict(DEFAULT_PROFILES)
    for name, overrides in doc.get("profiles", {}).items():
        try:
            klass = AttenuatorClass(name)
        except ValueError:
            raise ProfileConfigError(f"unknown attenuator class: {name!r}") from None
        if not isinstance(overrides, dict):
            raise ProfileConfigError(f"profile for {name!r} must be an object")
        profiles[klass] = profile_from_dict(DEFAULT_PROFILES[klass], overrides)
    return profiles
