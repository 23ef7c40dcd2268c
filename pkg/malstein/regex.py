"""
Caching functions for regexes used when reading text inputs.
"""

from functools import lru_cache
import re

# A single "u v" edge, optionally followed by a trailing comment.
EDGE_LINE = r"^\s*(\d+)\s+(\d+)\s*(?:#.*)?$"
# Blank lines and lines starting with '#'.
SKIPPED_LINE = r"^\s*(?:#.*)?$"


@lru_cache(64)
def cached_regex(regex_match_string: str, flags: int = 0):
    return re.compile(regex_match_string, flags)
