"""
╔══════════════════════════════════════════════════════════════════════════════╗
║                          RUN SUMMARY TEMPLATES                                ║
║                                                                               ║
║  One-line, human-readable summaries written to the diagnostics stream after  ║
║  each analysis. Data streams never carry these lines.                        ║
║                                                                               ║
║  Errors are reported on the x2^n scale ("CF-error x 128" for n = 7).         ║
╚══════════════════════════════════════════════════════════════════════════════╝
"""

from typing import Any, Dict


# ══════════════════════════════════════════════════════════════════════════════
#  SUMMARY TEMPLATES
# ══════════════════════════════════════════════════════════════════════════════

SUMMARY_TEMPLATES: Dict[str, str] = {
    "enumerate": (
        "{rows} error-vectors for target {target} at epsilon {epsilon}: "
        "max |CF-error|x{scale} = {max_error:.4f} for {argmax}; "
        "{within} of {rows} within tolerance"
    ),
    "worst-case": (
        "worst case for target {target} at epsilon {epsilon} over {space} vectors: "
        "|CF-error|x{scale} = {max_error:.4f} for {argmax} (gray position {position})"
    ),
    "classify": (
        "target {target} at epsilon {epsilon}: critical steps {critical} "
        "of {steps} (tolerance {tolerance_scaled:.4f} on the x{scale} scale)"
    ),
    "sweep": (
        "{rows} targets at accuracy {accuracy}, epsilon {epsilon}: "
        "global max |CF-error|x{scale} = {max_error:.4f} at numerators {numerators}"
    ),
    "simulate": (
        "target {target} under {vector} at epsilon {epsilon}: "
        "produced CFx{scale} = {produced:.4f}, CF-error x{scale} = {error:+.4f}, "
        "final volume {volume:.5f}"
    ),
    "closed-form": (
        "{curve} closed form over {points} starting CFs at epsilon {epsilon}: "
        "largest |error| {max_error:.6f}{detail}"
    ),
    "search-space": (
        "refusing exhaustive search: {vectors} simulations at accuracy {accuracy}; "
        "re-run with --force to proceed"
    ),
}


def get_summary(kind: str, **fields: Any) -> str:
    """
    Render a summary line.

    Args:
        kind: Template key (subcommand name or "search-space")
        **fields: Values for the template placeholders

    Returns:
        Formatted summary string
    """
    try:
        template = SUMMARY_TEMPLATES[kind]
    except KeyError:
        raise KeyError(f"no summary template for {kind!r}") from None
    return template.format(**fields)


def get_all_summaries() -> Dict[str, str]:
    """Get all summary templates."""
    return dict(SUMMARY_TEMPLATES)
