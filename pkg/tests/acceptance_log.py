"""Collects one result line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def report(name: str, ok: bool, elapsed: float, limit: float, detail: str = "") -> bool:
    """Record a verdict; the runtime limit is part of passing."""
    passed = ok and elapsed < limit
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] {name}: {elapsed:.2f}s (limit {limit:g}s)"
    if detail:
        line += f" | {detail}"
    LINES.append(line)
    print(line)
    return passed
