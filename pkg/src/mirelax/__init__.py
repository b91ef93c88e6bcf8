"""Query relaxation, strip-merging, and retrieval evaluation toolkit."""

from .errors import (
    DuplicateDocId,
    EmptyGroup,
    EmptyMask,
    EmptyQuery,
    EmptySubquery,
    FormatError,
    MalformedDocument,
    MaskShapeMismatch,
    MirelaxError,
    NoEvaluableTopics,
    NoRelevantJudgments,
    TooManyTerms,
    UnbalancedDelimiter,
)
from .evaluation import (
    BinaryQrels,
    MetricsReport,
    Qrels,
    RunEntry,
    TopicMetrics,
    average_precision,
    binarize,
    bpref,
    evaluate,
    precision_at_k,
    read_qrels,
    read_run,
    run_from_merged,
    write_run,
)
from .expansion import (
    PlanEntry,
    Strategy,
    SubqueryPlan,
    expand,
    expand_aps,
    expand_loo,
    expand_looto,
    expand_lro,
    expand_mto,
    expand_oqo,
    expand_tto,
    mask_weight,
    reverse_query,
)
from .index import (
    Document,
    Index,
    build_index,
    load_index,
    parse_document,
    save_index,
    search,
    tokenize_text,
)
from .merging import MergedItem, MergedList, SubqueryStats, merge_stats, strip_merge
from .model import (
    Hit,
    Query,
    ResultList,
    Subquery,
    SubqueryMask,
    apply_mask,
    format_query,
    full_mask,
    parse_mask,
    parse_query,
    read_topics,
    render_mask,
)

__version__ = "0.1.0"
