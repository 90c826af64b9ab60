"""Universal r-forms on the FRT quantum groups, verified in exact arithmetic."""
