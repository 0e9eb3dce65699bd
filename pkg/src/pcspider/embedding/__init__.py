"""End-to-end embedders for spiders and tree subdivisions, plus the oracle."""
from .oracle import ORACLE_LIMIT, OracleLimitError, brute_force_pc_spider, check_spider_certificate
from .spider import (
    KNOWN_G,
    DegenerateLabel,
    EmbeddingError,
    NotMonoC3Free,
    SpiderReport,
    embed_pc_spider,
    g_threshold,
    spider_threshold,
)
from .subdivision import SubdivisionReport, embed_pc_subdivision, embed_small_pc_tree
