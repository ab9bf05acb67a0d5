"""Small named graphs shared by the tests."""

from minorrecon.graph_core import Graph

P3 = Graph(3, [(0, 1), (1, 2)])
P4 = Graph(4, [(0, 1), (1, 2), (2, 3)])
C4 = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
C5 = Graph(5, [(i, (i + 1) % 5) for i in range(5)])
C6 = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
K2 = Graph(2, [(0, 1)])
K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
K4 = Graph(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
K5 = Graph(5, [(u, v) for u in range(5) for v in range(u + 1, 5)])
K13 = Graph(4, [(0, 1), (0, 2), (0, 3)])
K33 = Graph(6, [(u, v) for u in range(3) for v in range(3, 6)])
BOWTIE = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
TWO_EDGES = Graph(4, [(0, 1), (2, 3)])
DIAMOND = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
