"""Hit classification, coverage/redundancy metrics, difficulty and reports."""
