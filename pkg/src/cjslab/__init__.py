"""Finite contact join-semilattices."""
