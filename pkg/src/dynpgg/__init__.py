"""Dynamic voluntary-contribution public good game: simulation and analysis."""
