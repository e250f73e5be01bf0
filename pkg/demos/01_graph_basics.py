"""
Building and mutating a simple graph
====================================

Edge lists in the wild are messy: comments, string ids, duplicated and
reversed pairs, self-loops. ``build_graph`` cleans all of that up and
keeps a dense id map for writing results back out.
"""
import io

from degreeturn import Graph, average_degree, build_graph, common_neighbor_count

text = """\
% a tiny friendship file
alice bob
bob carol
carol alice
bob alice
dave dave
dave erin
"""
g, report = build_graph(io.StringIO(text))
print(f"|V| = {g.n}, |E| = {g.num_edges}")
print(f"dropped {report.duplicates} duplicate(s) and {report.self_loops} self-loop(s)")
print("id map:", report.id_map())

# neighbors come back sorted, which is what makes overlap counting a merge
for ext, i in report.id_map().items():
    print(f"  {ext:>5} -> {g.neighbors(i).tolist()}")

print("common friends of alice and bob:", common_neighbor_count(g, 0, 1))
print("<k> =", average_degree(g))

###############################################################################
# The same object supports in-place edits; degree-0 nodes are fine.

h = Graph.from_edges(3, [(0, 1), (1, 2)])
print("add (0, 2):", h.add_edge(0, 2))
print("add (0, 2) again:", h.add_edge(0, 2))
print("remove (0, 1):", h.remove_edge(0, 1))
print("degrees:", h.degrees.tolist(), " sum =", h.degrees.sum(), " 2|E| =", 2 * h.num_edges)
