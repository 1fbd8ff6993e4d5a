from .lower import CLASS_REL, CompileMeta, class_atom_relation, compile
from .qualifiers import KEYWORDS, NonBinaryQualifier, expand_qualifier

__all__ = ["CLASS_REL", "CompileMeta", "KEYWORDS", "NonBinaryQualifier", "class_atom_relation", "compile", "expand_qualifier"]
