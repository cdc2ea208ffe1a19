"""Round-based simulator for clustered WSN routing: PRIYA, LEACH, TEEN, APTEEN."""

__version__ = "0.1.0"
