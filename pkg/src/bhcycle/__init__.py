"""Fault-tolerant Hamiltonian cycles in the balanced hypercube BH_n."""

from .topology import Topology, build_direct, build_recursive, decompose, backup_vertex, encode, decode
from .faults import FaultSet, find_f4_cycles, min_degree, partition, classify_edge, pivot_vertices, load_faults

__version__ = "0.1.0"
