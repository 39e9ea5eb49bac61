"""moldkit: make your domain model explainable.

Attach views, actions and searches to your own types; compose tests that
return their fixtures; wrap raw data and collections into domain shells;
keep a live project diary; and walk live object graphs through a local
inspector service, a CLI, or the bundled web UI.
"""

from .core import (
    ColumnedList,
    Forward,
    HandleSpace,
    ItemList,
    SubjectHandle,
    Text,
    TreeRoots,
    ToolExtensionRegistry,
    ViewData,
    action,
    discover_actions,
    discover_searches,
    discover_views,
    raw_view,
    render_view,
    resolve_forward,
    run_action,
    run_search,
    search,
    substring_match,
    view,
)
from .examples import (
    ExampleGraph,
    check,
    check_equal,
    collect_examples,
    example,
    execution_order,
    materialize_subject,
    run_examples,
)
from .notebook import Block, Page, PageDatabase, search_pages
from .playground import EvalOutcome, eval_snippet
from .wrappers import CollectionGroup, DataWrapper, accessor, group, raw_of, wrap

__version__ = "0.1.0"

__all__ = [
    "Block",
    "CollectionGroup",
    "ColumnedList",
    "DataWrapper",
    "EvalOutcome",
    "ExampleGraph",
    "Forward",
    "HandleSpace",
    "ItemList",
    "Page",
    "PageDatabase",
    "SubjectHandle",
    "Text",
    "ToolExtensionRegistry",
    "TreeRoots",
    "ViewData",
    "accessor",
    "action",
    "check",
    "check_equal",
    "collect_examples",
    "discover_actions",
    "discover_searches",
    "discover_views",
    "eval_snippet",
    "example",
    "execution_order",
    "group",
    "materialize_subject",
    "raw_of",
    "raw_view",
    "render_view",
    "resolve_forward",
    "run_action",
    "run_examples",
    "run_search",
    "search",
    "search_pages",
    "substring_match",
    "view",
    "wrap",
]
