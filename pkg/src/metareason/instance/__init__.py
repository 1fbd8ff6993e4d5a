from .ais import (
    AbstractInstantiation,
    Link,
    ObjectDecl,
    PartialInstance,
    UnknownClass,
    UnknownFeature,
    UnknownObject,
    parse_instance,
    serialize_instance,
)
from .bounds import (
    BoundsError,
    CardinalityScopeConflict,
    Prepared,
    ScopeBelowAssertion,
    ScopeConfig,
    build_bounds,
    prepare,
)
