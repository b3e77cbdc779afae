"""Buffer-timing analysis for high-success-probability quantum repeater paths."""

from .model import (
    GOLAY,
    STEANE,
    AppClass,
    CodeParams,
    Link,
    LinkKind,
    Path,
    end_to_end_latency,
    mirror,
    polarity,
    polarity_sum,
)
from .timing import (
    LinkEndTimes,
    NamedPattern,
    Schedule,
    WaitReport,
    evaluate,
    make_schedule,
    matched_tpt,
    ready_times,
    rep_rate,
)

__version__ = "0.1.0"
