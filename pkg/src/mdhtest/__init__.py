"""Martingale difference divergence tests for univariate time series."""

from ._errors import (
    BadBandwidthParams,
    BadMomentOrder,
    DegenerateSeries,
    ExplosiveSample,
    LagOutOfRange,
    MdhError,
    NonFiniteInput,
    NonPositivePrice,
    ParseError,
    SeriesTooShort,
)
from .analysis import CorrelogramRow, StatConfig, TestReport, acf, compute_pvalue, correlogram, run_test
from .bootstrap import BootstrapConfig, BootstrapResult, Scheme, boot_mn, boot_multiplier, boot_tn
from .dgp import ConstantProcess, DgpSpec, simulate
from .io import ingest_series
from .kernels import KernelKind, KernelSpec, bandwidth, make_kernel
from .measures import (
    LagPairView,
    MddValue,
    MomentEstimates,
    build_lag_pair,
    dcov2,
    mdc2,
    mdd2,
    mdd2_power,
    mdd_value,
    moment_estimates,
)
from .montecarlo import (
    CellResult,
    ExperimentReport,
    ExperimentSpec,
    desk_preset,
    full_preset,
    read_report,
    run_experiment,
    write_report,
)
from .statistics import StatKind, StatisticValue, stat_dn2, stat_m99, stat_mn, stat_mwnf, stat_tn

__version__ = "0.1.0"
