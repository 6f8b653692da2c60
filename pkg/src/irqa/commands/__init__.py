"""irqa — CLI subcommands."""
