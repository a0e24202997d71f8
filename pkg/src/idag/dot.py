"""Graphviz rendering: inputs on a source rank at the left, outputs on a sink
rank at the right, internal nodes as circles, weight labels on edges where
the weight is not 1."""

from __future__ import annotations

from .core import DEFAULT_LABEL, Idag, In, NodeRef, Vertex, edge_sort_key


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def idag_to_dot(d: Idag) -> str:
    pos = {nid: k for k, nid in enumerate(d.node_ids)}

    def ref(v: Vertex) -> str:
        if isinstance(v, In):
            return f"i{v.index}"
        if isinstance(v, NodeRef):
            return f"v{pos[v.id]}"
        return f"o{v.index}"

    lines = ["digraph idag {", "  rankdir=LR;", "  node [fontsize=11];"]
    ins = " ".join(
        f'i{i} [shape=point, xlabel="{i}"];' for i in range(d.n_in)
    )
    outs = " ".join(
        f'o{j} [shape=point, xlabel="{j}"];' for j in range(d.n_out)
    )
    lines.append("  { rank=source; %s }" % ins if d.n_in else "  { rank=source; }")
    lines.append("  { rank=sink; %s }" % outs if d.n_out else "  { rank=sink; }")
    for nid, lbl in d.nodes:
        text = nid if lbl == DEFAULT_LABEL else f"{nid}:{lbl}"
        lines.append(f"  v{pos[nid]} [shape=circle, label={_quote(text)}];")
    # invisible chains fix the vertical order within the interface ranks
    for prefix, count in (("i", d.n_in), ("o", d.n_out)):
        for k in range(count - 1):
            lines.append(
                f"  {prefix}{k} -> {prefix}{k + 1} [style=invis, constraint=false];"
            )
    for src, dst in sorted(d.edges, key=edge_sort_key(d)):
        w = d.edges[(src, dst)]
        attr = f' [label="{w}"]' if w != 1 else ""
        lines.append(f"  {ref(src)} -> {ref(dst)}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
