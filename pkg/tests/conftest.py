import random

from homorder.structures import OrientedPath, OrientedTree

# one line per acceptance criterion, echoed in the terminal summary so the
# verdicts are visible even when pytest captures stdout
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_path(rng: random.Random, max_arcs: int, min_arcs: int = 0) -> OrientedPath:
    n = rng.randint(min_arcs, max_arcs)
    return OrientedPath("".join(rng.choice("FB") for _ in range(n)))


def random_tree(rng: random.Random, max_vertices: int, min_vertices: int = 1) -> OrientedTree:
    n = rng.randint(min_vertices, max_vertices)
    arcs = []
    for i in range(1, n):
        parent = rng.randrange(i)
        arcs.append((parent, i) if rng.random() < 0.5 else (i, parent))
    return OrientedTree(n, tuple(arcs))
