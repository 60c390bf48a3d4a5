from typing import Literal

SearchMode = Literal["longest_match", "all_matches", "all_longest_matches"]

OutputMode = Literal["grammar", "all"]

PreprocessorName = Literal["Tokenizer", "BasicTokenizer", "Gazetteer"]

TokenClass = Literal[
    "first_capital_word",
    "lowercase_word",
    "mixed_word_first_capital",
    "word_with_hyphen_first_capital",
    "word_with_apostrophe_first_capital",
    "any_natural_number",
    "punctuation",
    "apostrophe",
    "other",
]

Dimension = Literal["volitional", "epistemic", "temporal"]

MatrixKind = Literal["report", "evidential", "possibility"]

DisasterType = Literal["MMD", "ND", "DO"]

FilterDimension = Literal["volitional", "epistemic", "temporal", "rule", "disaster_type"]

OutputFormat = Literal["block", "json"]
