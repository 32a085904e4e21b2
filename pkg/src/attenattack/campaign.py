"""Stepwise laser-damage test campaign against one attenuator specimen.

The campaign raises the injected c.w. power from a start level in fixed dBm
steps, dwells at each level, measures the attenuation after shutoff (and,
for thermally responding classes, immediately at shutoff), and stops on the
first of: attenuation drop beyond the success threshold, attenuation rise
beyond the failure threshold, a fiber-fuse interlock trip at the output
connector, or the maximum deliverable power being exhausted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, asdict

import numpy as np

from .fiber import (
    FiberLink,
    LaserSource,
    dbm_to_watts,
    watts_to_dbm,
    delivered_power,
    max_injectable_power,
)
from .attenuators import (
    AttenuatorClass,
    AttenuatorState,
    DamageProfile,
    apply_exposure,
    attenuation,
    cool_down,
    new_attenuator,
)

SCHEMA_VERSION = 1


class CampaignOutcome(enum.Enum):
    SUCCESS = "Success"
    CRITICAL_FAILURE = "CriticalFailure"
    INCONCLUSIVE = "Inconclusive"
    FIBER_FUSE_DOS = "FiberFuseDoS"


@dataclass(frozen=True)
class CampaignConfig:
    start_power_dbm: float = 25.0
    step_dbm: float = 0.5
    dwell_s: float = 10.0
    success_delta_db: float = -1.0
    failure_delta_db: float = 3.0
    max_power_dbm: float = 39.5
    cooldown_s: float = 10.0
    connectorized_output: bool = False
    fuse_threshold_w: float = 4.5

    def __post_init__(self):
        if self.start_power_dbm > self.max_power_dbm:
            raise ValueError("start power must not exceed max power")
        if not 0.5 <= self.step_dbm <= 1.0:
            raise ValueError(f"step_dbm must lie in [0.5, 1], got {self.step_dbm}")
        if self.dwell_s < 10.0:
            raise ValueError(f"dwell_s must be >= 10, got {self.dwell_s}")
        if not self.success_delta_db < 0 < self.failure_delta_db:
            raise ValueError("need success_delta_db < 0 < failure_delta_db")
        if self.cooldown_s < 0:
            raise ValueError("cooldown_s must be >= 0")
        if self.fuse_threshold_w <= 0:
            raise ValueError("fuse_threshold_w must be > 0")


@dataclass(frozen=True)
class CampaignStep:
    power_dbm_set: float
    power_w_delivered: float
    duration_s: float
    attenuation_before_db: float
    attenuation_immediate_db: float
    attenuation_after_db: float
    delta_db: float
    event: str


@dataclass
class CampaignResult:
    outcome: CampaignOutcome
    steps: list[CampaignStep]
    final_state: AttenuatorState
    baseline_db: float
    final_delta_db: float
    attack_power_dbm: float | None

    def to_json_dict(self, config: CampaignConfig) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "config": asdict(config),
            "attenuator_class": self.final_state.klass.value,
            "setpoint_db": self.final_state.setpoint_db,
            "seed": self.final_state.seed,
            "baseline_db": self.baseline_db,
            "outcome": self.outcome.value,
            "final_delta_db": self.final_delta_db,
            "attack_power_dbm": self.attack_power_dbm,
            "steps": [asdict(s) for s in self.steps],
        }


def check_fuse(config: CampaignConfig, power_w_at_connector: float) -> bool:
    """Fiber-fuse trip test at the device's output connector.

    Only connectorized outputs can ignite; splice-terminated outputs pass
    any power the fiber itself tolerates.
    """
    if power_w_at_connector < 0:
        raise ValueError("power must be >= 0")
    return config.connectorized_output and power_w_at_connector >= config.fuse_threshold_w


def run_campaign(
    config: CampaignConfig,
    state: AttenuatorState,
    link: FiberLink,
    laser: LaserSource,
) -> CampaignResult:
    """Drive one attenuator through the stepwise damage procedure."""
    if state.destroyed:
        raise ValueError("campaign requires an intact attenuator")
    injectable_w, _ = max_injectable_power(link, laser)
    if dbm_to_watts(config.start_power_dbm) > injectable_w:
        raise ValueError(
            f"start power {config.start_power_dbm} dBm exceeds the injectable "
            f"limit of {injectable_w:.3g} W"
        )
    cap_dbm = min(config.max_power_dbm, watts_to_dbm(injectable_w))

    baseline_db = attenuation(state)
    steps: list[CampaignStep] = []
    outcome = CampaignOutcome.INCONCLUSIVE
    final_delta = 0.0
    attack_power: float | None = None

    p_dbm = config.start_power_dbm
    while True:
        p_set = min(p_dbm, cap_dbm)
        p_delivered = delivered_power(link, dbm_to_watts(p_set))
        before = attenuation(state)

        if check_fuse(config, p_delivered):
            steps.append(
                CampaignStep(
                    power_dbm_set=p_set,
                    power_w_delivered=p_delivered,
                    duration_s=0.0,
                    attenuation_before_db=before,
                    attenuation_immediate_db=before,
                    attenuation_after_db=before,
                    delta_db=0.0,
                    event="FuseTrip",
                )
            )
            outcome = CampaignOutcome.FIBER_FUSE_DOS
            final_delta = before - baseline_db
            break

        state, exposure = apply_exposure(state, p_delivered, config.dwell_s)
        immediate = attenuation(state)
        state = cool_down(state, config.cooldown_s)
        after = attenuation(state)
        steps.append(
            CampaignStep(
                power_dbm_set=p_set,
                power_w_delivered=p_delivered,
                duration_s=config.dwell_s,
                attenuation_before_db=before,
                attenuation_immediate_db=immediate,
                attenuation_after_db=after,
                delta_db=after - before,
                event=exposure.kind.value,
            )
        )

        delta_eval = min(immediate, after) - baseline_db
        delta_post = after - baseline_db
        if delta_eval <= config.success_delta_db:
            outcome = CampaignOutcome.SUCCESS
            final_delta = delta_eval
            attack_power = p_set
            break
        if state.destroyed or delta_post >= config.failure_delta_db:
            outcome = CampaignOutcome.CRITICAL_FAILURE
            final_delta = delta_post
            break
        if p_set >= cap_dbm:
            final_delta = delta_post
            break
        p_dbm += config.step_dbm

    return CampaignResult(
        outcome=outcome,
        steps=steps,
        final_state=state,
        baseline_db=baseline_db,
        final_delta_db=final_delta,
        attack_power_dbm=attack_power,
    )


@dataclass(frozen=True)
class MonteCarloSummary:
    n_trials: int
    success_rate: float
    critical_failure_rate: float
    inconclusive_rate: float
    fiber_fuse_rate: float
    mean_success_delta_db: float | None
    mean_attack_threshold_dbm: float | None

    def to_json_dict(self) -> dict:
        return asdict(self)


def trial_seeds(master_seed: int, n_trials: int) -> list[int]:
    """Independent per-trial seeds derived by SeedSequence state expansion."""
    ss = np.random.SeedSequence(master_seed)
    return [int(s) for s in ss.generate_state(n_trials, dtype=np.uint64)]


def monte_carlo(
    config: CampaignConfig,
    klass: AttenuatorClass,
    profile: DamageProfile | None = None,
    setpoint_db: float | None = None,
    n_trials: int = 1000,
    seed: int = 0,
    link: FiberLink | None = None,
    laser: LaserSource | None = None,
    collect_results: bool = False,
) -> MonteCarloSummary | tuple[MonteCarloSummary, list[CampaignResult]]:
    """Run independent seeded campaigns and aggregate outcome statistics."""
    if n_trials < 1:
        raise ValueError(f"n_trials must be >= 1, got {n_trials}")
    if link is None:
        link = FiberLink(length_km=0.02)
    if laser is None:
        laser = LaserSource()

    counts = {o: 0 for o in CampaignOutcome}
    success_deltas: list[float] = []
    attack_powers: list[float] = []
    results: list[CampaignResult] = []

    for trial_seed in trial_seeds(seed, n_trials):
        state = new_attenuator(klass, profile, setpoint_db, seed=trial_seed)
        result = run_campaign(config, state, link, laser)
        counts[result.outcome] += 1
        if result.outcome is CampaignOutcome.SUCCESS:
            success_deltas.append(result.final_delta_db)
            attack_powers.append(result.attack_power_dbm)
        if collect_results:
            results.append(result)

    summary = MonteCarloSummary(
        n_trials=n_trials,
        success_rate=counts[CampaignOutcome.SUCCESS] / n_trials,
        critical_failure_rate=counts[CampaignOutcome.CRITICAL_FAILURE] / n_trials,
        inconclusive_rate=counts[CampaignOutcome.INCONCLUSIVE] / n_trials,
        fiber_fuse_rate=counts[CampaignOutcome.FIBER_FUSE_DOS] / n_trials,
        mean_success_delta_db=(
            sum(success_deltas) / len(success_deltas) if success_deltas else None
        ),
        mean_attack_threshold_dbm=(
            sum(attack_powers) / len(attack_powers) if attack_powers else None
        ),
    )
    if collect_results:
        return summary, results
    return summary
