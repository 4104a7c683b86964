"""Social Centrality: k-truss based centrality, baselines and evaluation harness."""

__version__ = "0.1.0"
