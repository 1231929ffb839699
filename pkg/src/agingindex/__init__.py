"""GT (Gini-type) aging/rejuvenation coefficient for lifetime distributions and repairable systems."""

from .empirical import EventHistory, LifetimeSample, StepCurve, gt_from_step_curve, mcf, nelson_aalen
from .errors import (
    AgingIndexError,
    DegenerateCurveError,
    DegenerateHorizonError,
    DomainError,
    MalformedInputError,
    NonConvergenceError,
    OverflowHorizonError,
    SingularityError,
)
from .gt_index import (
    Classification,
    GtResult,
    SampledCurve,
    classify,
    gt_from_sampled_curve,
    gt_nonrepairable,
    gt_weibull_closed_form,
    integrate_adaptive,
)
from .hazard_models import (
    DistributionSpec,
    Family,
    cdf,
    cumulative_hazard,
    effective_failure_rate,
    hazard,
    reg_inc_gamma_lower,
    reg_inc_gamma_upper,
    survival,
)
from .point_process import (
    CifEstimate,
    Model,
    PointProcessSpec,
    estimate_cif,
    gt_repairable,
    power_law_cif,
    simulate_history,
    solve_renewal_equation,
)

__version__ = "0.1.0"
