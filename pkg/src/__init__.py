"""plansim - districting plan ensembles and relabeling-invariant similarity."""
