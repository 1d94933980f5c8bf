"""Translation-invariant matrix product states: construction, membership
certificates and rediscovery of the defining polynomial invariants."""

__version__ = "0.1.0"
