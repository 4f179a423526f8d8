"""Plant-centric HAB risk scoring and monitoring toolkit."""

__version__ = "0.1.0"
