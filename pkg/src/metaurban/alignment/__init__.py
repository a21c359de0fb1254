"""Aligning raw datasets to the schema, by rules or by a chat model."""

from .core import AlignmentResult, Llm, PlanEntry, RuleBased, build_plan
from .llm import LlmEndpointConfig, align_llm, extract_csv_block
from .metadata_csv import ParsedMetadata, infer_category, parse_metadata, parse_metadata_csv
from .prompt import build_prompt
from .rules import (
    RULE_SETS,
    CodebookLookup,
    ColumnNameList,
    ConstantValue,
    CoverageFromColumns,
    FieldRule,
    KeyKindDerived,
    RuleSet,
    align_rule_based,
    get_rule_set,
)

__all__ = [
    "AlignmentResult",
    "CodebookLookup",
    "ColumnNameList",
    "ConstantValue",
    "CoverageFromColumns",
    "FieldRule",
    "KeyKindDerived",
    "Llm",
    "LlmEndpointConfig",
    "ParsedMetadata",
    "PlanEntry",
    "RULE_SETS",
    "RuleBased",
    "RuleSet",
    "align_llm",
    "align_rule_based",
    "build_plan",
    "build_prompt",
    "extract_csv_block",
    "get_rule_set",
    "infer_category",
    "parse_metadata",
    "parse_metadata_csv",
]
