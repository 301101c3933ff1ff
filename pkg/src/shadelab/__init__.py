"""shadelab: exact workbench for shades of (cross-)intersecting set
families, finite tree colourings, and branching-decay orders.

Layout: `setfam` is the bit-mask kernel for families over [n]; `extremal`
holds the closed-form maxima and ratio tables; `oracle` the brute-force
ground truth with witnesses; `trees` the finite branching trees, the
half-block colouring and the density bound; `decay` the symbolic and
windowed decay comparisons; `pipeline` the finite parameter chain tying
the tree side to the cross-intersection oracle.  `shadelab.cli` is the
command-line front end.
"""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
