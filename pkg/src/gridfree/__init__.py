"""Grid-free linear hypergraphs over finite fields, with search and rank-based certificates."""

from .construct import ConstructionParams, build
from .ff import Field, FieldElement, make_field
from .hyper import LinearHypergraph, check_linear, load, save
from .patterns import PatternSpec, exhaustive_certify, find_embedding

__version__ = "0.1.0"
