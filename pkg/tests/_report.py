"""Shared list of acceptance result lines, printed at the end of the session."""

LINES: list[str] = []


def report(number, ok: bool, detail: str) -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    LINES.append(line)
    print(line, flush=True)
    return line
