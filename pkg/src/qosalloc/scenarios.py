"""Ready-made scenario builders for the two-link reference setup.

Both scenarios drive a single service over two links (maxima 50 and 30
Mbps, 1.25-Mbps search step), with twelve response levels spaced 2.5 Mbps
apart, three QoS levels targeting levels 7 / 9 / 11, a 40-Mbps background
service on ample-capacity (300 Mbps) links, and a 16-record generated seed
profile. The tracking scenario holds the source rate at 40 Mbps and steps
it to 45 mid-run; the comparison scenario uses a surge trace
40 -> 58 -> 36 -> 44 Mbps in 10-epoch plateaus to stress rate tracking.

The JSON files under scenarios/ mirror these builders; a test pins them
against each other so they cannot drift.
"""

from __future__ import annotations

from .baselines import PredictorKind
from .harness import ScenarioConfig, SeedSpec
from .netsim import LinkSpec

LEVEL_COUNT = 12
THRESHOLDS = (-11.25, -8.75, -6.25, -3.75, -1.25, 1.25, 3.75, 6.25, 8.75, 11.25, 13.75)
TARGETS = (7, 9, 11)
GRID_STEP = 1.25
GRID_MAX = (50.0, 30.0)
LINK_CAPACITY = 300.0
BACKGROUND_RATE = 40.0
PROFILE_CAPACITY = 31
SEED_RECORDS = 16
NOMINAL_RATE = 40.0
RUN_LENGTH = 40
SIGMA2 = 200.0


def _base(qos_level: int, rates: tuple[float, ...], rng_seed: int,
          capacity: int = PROFILE_CAPACITY,
          predictor: PredictorKind | None = None) -> ScenarioConfig:
    return ScenarioConfig(
        level_count=LEVEL_COUNT,
        thresholds=THRESHOLDS,
        targets=TARGETS,
        grid_step=GRID_STEP,
        grid_max_per_link=GRID_MAX,
        capacity=capacity,
        run_length=len(rates),
        rng_seed=rng_seed,
        links=(
            LinkSpec(LINK_CAPACITY, BACKGROUND_RATE),
            LinkSpec(LINK_CAPACITY, BACKGROUND_RATE),
        ),
        qos_levels=(qos_level,),
        rates=(rates,),
        seed=SeedSpec(records=SEED_RECORDS, nominal_rate=NOMINAL_RATE),
        sigma2=SIGMA2,
        predictor=predictor or PredictorKind(),
    )


def tracking_rates(run_length: int = RUN_LENGTH) -> tuple[float, ...]:
    """40 Mbps with a +5 step at mid-run."""
    half = run_length // 2
    return tuple([40.0] * half + [45.0] * (run_length - half))


def surge_rates(run_length: int = RUN_LENGTH) -> tuple[float, ...]:
    """Plateaus of 40 / 58 / 36 / 44 Mbps, a quarter of the run each."""
    quarter = run_length // 4
    rates = [40.0] * quarter + [58.0] * quarter + [36.0] * quarter
    rates += [44.0] * (run_length - len(rates))
    return tuple(rates)


def tracking_scenario(qos_level: int = 3, rng_seed: int = 20240408,
                      run_length: int = RUN_LENGTH) -> ScenarioConfig:
    """Closed-loop rate-tracking run for one QoS level."""
    return _base(qos_level, tracking_rates(run_length), rng_seed)


def comparison_scenario(qos_level: int = 2, rng_seed: int = 20240408,
                        run_length: int = RUN_LENGTH,
                        capacity: int = PROFILE_CAPACITY,
                        predictor: PredictorKind | None = None) -> ScenarioConfig:
    """Surge-trace run used for predictor and capacity sweeps."""
    return _base(qos_level, surge_rates(run_length), rng_seed,
                 capacity=capacity, predictor=predictor)
