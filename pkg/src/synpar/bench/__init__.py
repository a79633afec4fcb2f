from .harness import CSV_HEADER, RunReport, RunRow, RunSpec, emit, run

__all__ = ["CSV_HEADER", "RunReport", "RunRow", "RunSpec", "emit", "run"]
