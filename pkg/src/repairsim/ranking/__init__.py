from .rank import (
    COMBINED,
    CONTEXT,
    EQUIVALENT_TO_MODIFICATION_POINT,
    EQUIVALENT_TO_RECIPIENT,
    INGREDIENT,
    Ranking,
    combined_name,
    donor_contexts_with_target,
    rank_combined,
    rank_contexts,
    rank_ingredients,
    ranking_rows,
    write_rankings_csv,
)

__all__ = [
    "COMBINED",
    "CONTEXT",
    "EQUIVALENT_TO_MODIFICATION_POINT",
    "EQUIVALENT_TO_RECIPIENT",
    "INGREDIENT",
    "Ranking",
    "combined_name",
    "donor_contexts_with_target",
    "rank_combined",
    "rank_contexts",
    "rank_ingredients",
    "ranking_rows",
    "write_rankings_csv",
]
