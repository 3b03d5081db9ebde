"""
Reporting module for trilin.

CSV and JSON writers with run manifests.
"""

from .writer import OutputFile, ResultWriter, RunManifest, hash_inputs

__all__ = [
    "OutputFile",
    "ResultWriter",
    "RunManifest",
    "hash_inputs",
]
