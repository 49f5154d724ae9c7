"""Downlink/uplink decoupling simulator for two-tier cellular networks."""

__version__ = "1.0.0"
