"""Symbolic toolkit for pure mapping class groups of locally finite graphs.

Submodules:
  blueprint   graph families and their end-space profiles
  classify    coarse-boundedness and asymptotic-dimension classification
  freegrp     exact free-group words, Stallings graphs, corank bookkeeping
  mcg         proper mapping classes in canonical form, composition, equality
  cbwitness   coarse-boundedness witness factorizations with certificates
  fluxdim     flux homomorphisms, displacement, Z^k quasi-embeddings
  lengthtree  comb length functions, ultrametric trees, leveled actions
  cli         command line front end
"""

__version__ = "0.1.0"
