"""Laser-damage attack simulator for QKD source attenuators."""

from .fiber import (
    FiberLink,
    LaserSource,
    ThresholdCurve,
    dbm_to_watts,
    delivered_power,
    effective_length,
    max_injectable_power,
    sbs_threshold,
    srs_threshold,
    threshold_curve,
    watts_to_dbm,
)
from .attenuators import (
    AttenuatorClass,
    AttenuatorState,
    DamageProfile,
    DEFAULT_PROFILES,
    ExposureOutcome,
    OutcomeKind,
    apply_exposure,
    attenuation,
    cool_down,
    load_profiles,
    new_attenuator,
)
from .campaign import (
    CampaignConfig,
    CampaignOutcome,
    CampaignResult,
    CampaignStep,
    MonteCarloSummary,
    check_fuse,
    monte_carlo,
    run_campaign,
)
from .impact import ImpactClass, ImpactReport, adjusted_mu, classify, impact_report, mpn_ratio
from .risk import (
    Prior,
    RiskQuery,
    TestRecord,
    beta_binomial_pmf,
    posterior,
    prob_exceeds_infinite_population,
    prob_fraction_vulnerable_exceeds,
    risk_report,
)

__version__ = "0.1.0"
