"""Free-product completions of the sample graphs and the starred conditions."""

from smallcancel.completion import build_completion, check_gr_star, is_embedded_sheets
from smallcancel.conditions import check_gr
from smallcancel.fileio import format_word
from smallcancel.graph import find_isomorphism
from smallcancel.samples import choices_graphs, differences_graph, free_product_example

left, right, factors = choices_graphs()
cl, cr = build_completion(left, factors), build_completion(right, factors)
print("choices: inputs isomorphic:", find_isomorphism(left, right) is not None,
      "completions isomorphic:", find_isomorphism(cl.graph, cr.graph) is not None)

g, factors = free_product_example()
c = build_completion(g, factors)
print("free product: vertices", c.graph.n_vertices, "edges", len(c.graph.edges),
      "embedded sheets", is_embedded_sheets(c).ok)

g, factors = differences_graph(radius=3)
print("differences: Gr(6)", check_gr(g, 6).passed)
rep = check_gr_star(build_completion(g, factors), 6)
print("differences: Gr*(6)", rep.passed, "pieces",
      [format_word(w) for w in rep.witness["piece_labels"]])
