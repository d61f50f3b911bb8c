"""Exact-arithmetic root data, Weyl groups and semisimple elements of
reductive groups over closures of finite fields, with a verification harness
and CLI (`ssverify`)."""

__version__ = "0.1.0"
