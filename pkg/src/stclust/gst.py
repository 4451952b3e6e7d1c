"""Word-level generalized suffix tree with per-document occurrence counts.

Every suffix of every document (plus a unique per-document terminator
symbol) is inserted by walking down from the root, splitting edges at the
first mismatch.  With T total symbols and L the longest document, this is
O(T * L) symbol comparisons in the worst case — quadratic per document,
which is fine at desk scale and trivially correct; correctness is pinned
by a brute-force substring-enumeration oracle in the test suite.

A built tree is immutable and safe to share across threads.  Node ids are
assigned in construction order, so anything sorted by node id is
deterministic for a fixed document order.

Terminators are ``("$", doc_index)`` tuples; they can never equal a word
(words are strings) and they never appear in reported phrases.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterator, Sequence

Symbol = object  # a word (str) or a terminator tuple
Terminator = tuple[str, int]


@dataclass
class SuffixTreeNode:
    """One tree node; ``edge_span`` indexes the word span labeling the
    incoming edge as (sequence index, start, end)."""

    id: int
    parent: int
    edge_span: tuple[int, int, int] | None
    children: dict = field(default_factory=dict)
    doc_occurrences: dict = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return not self.children


class GeneralizedSuffixTree:
    """Suffix tree over multiple word sequences."""

    def __init__(self) -> None:
        self.nodes: list[SuffixTreeNode] = [SuffixTreeNode(0, -1, None)]
        self._seqs: list[list] = []
        self.doc_ids: list[Hashable] = []
        self._doc_index: dict = {}

    # -- construction -------------------------------------------------

    @classmethod
    def build(
        cls,
        sequences: Sequence[Sequence[str]],
        doc_ids: Sequence[Hashable] | None = None,
    ) -> "GeneralizedSuffixTree":
        """Build the tree over word sequences, one terminator per document.

        ``doc_ids`` default to the sequence positions.  An empty sequence
        contributes only its terminator leaf.
        """
        tree = cls()
        if doc_ids is None:
            doc_ids = list(range(len(sequences)))
        if len(doc_ids) != len(sequences):
            raise ValueError("doc_ids and sequences must have equal length")
        if len(set(doc_ids)) != len(doc_ids):
            raise ValueError("doc_ids must be unique")
        tree.doc_ids = list(doc_ids)
        tree._doc_index = {d: i for i, d in enumerate(doc_ids)}
        for idx, words in enumerate(sequences):
            seq = list(words)
            seq.append(("$", idx))
            tree._seqs.append(seq)
            for start in range(len(seq)):
                tree._insert_suffix(idx, start)
        tree._aggregate_occurrences()
        return tree

    def _new_node(self, parent: int, span: tuple[int, int, int]) -> SuffixTreeNode:
        node = SuffixTreeNode(len(self.nodes), parent, span)
        self.nodes.append(node)
        return node

    def _insert_suffix(self, seq_idx: int, start: int) -> None:
        seq = self._seqs[seq_idx]
        node_id = 0
        pos = start
        while True:
            symbol = seq[pos]
            child_id = self.nodes[node_id].children.get(symbol)
            if child_id is None:
                leaf = self._new_node(node_id, (seq_idx, pos, len(seq)))
                self.nodes[node_id].children[symbol] = leaf.id
                return
            child = self.nodes[child_id]
            e_idx, e_start, e_end = child.edge_span
            edge = self._seqs[e_idx]
            length = e_end - e_start
            j = 1
            while j < length and edge[e_start + j] == seq[pos + j]:
                j += 1
            if j == length:
                node_id = child_id
                pos += length
                continue
            # Split the edge at offset j; the unique terminator guarantees
            # the remaining suffix is non-empty here.
            internal = self._new_node(node_id, (e_idx, e_start, e_start + j))
            child.edge_span = (e_idx, e_start + j, e_end)
            child.parent = internal.id
            internal.children[edge[e_start + j]] = child_id
            self.nodes[node_id].children[symbol] = internal.id
            leaf = self._new_node(internal.id, (seq_idx, pos + j, len(seq)))
            internal.children[seq[pos + j]] = leaf.id
            return

    def _aggregate_occurrences(self) -> None:
        # Preorder, then sweep in reverse so children are summed before
        # their parent.
        order: list[int] = []
        stack = [0]
        while stack:
            nid = stack.pop()
            order.append(nid)
            stack.extend(self.nodes[nid].children.values())
        for nid in reversed(order):
            node = self.nodes[nid]
            if node.is_leaf:
                e_idx = node.edge_span[0]
                node.doc_occurrences = {self.doc_ids[e_idx]: 1}
                continue
            occ: dict = {}
            for child_id in node.children.values():
                for doc, count in self.nodes[child_id].doc_occurrences.items():
                    occ[doc] = occ.get(doc, 0) + count
            node.doc_occurrences = occ

    # -- queries -------------------------------------------------------

    def _check_node(self, node_id: int) -> SuffixTreeNode:
        if not isinstance(node_id, int) or not 0 <= node_id < len(self.nodes):
            raise ValueError(f"node {node_id!r} is not in this tree")
        return self.nodes[node_id]

    def _edge_words(self, node: SuffixTreeNode) -> list[str]:
        if node.edge_span is None:
            return []
        e_idx, e_start, e_end = node.edge_span
        return [s for s in self._seqs[e_idx][e_start:e_end] if isinstance(s, str)]

    def phrase_of(self, node_id: int) -> tuple[str, ...]:
        """Concatenated edge labels from root to node, terminators excluded."""
        node = self._check_node(node_id)
        parts: list[list[str]] = []
        while node.id != 0:
            parts.append(self._edge_words(node))
            node = self.nodes[node.parent]
        words: list[str] = []
        for part in reversed(parts):
            words.extend(part)
        return tuple(words)

    def nodes_with_min_doc_support(self, m: int) -> list[int]:
        """Ids of all non-root nodes whose phrase occurs in >= m documents."""
        if m < 1:
            raise ValueError("m must be >= 1")
        return [n.id for n in self.nodes[1:] if len(n.doc_occurrences) >= m]

    def doc_term_frequency(self, node_id: int, doc_id: Hashable) -> int:
        """Occurrences of the node's phrase in one document."""
        node = self._check_node(node_id)
        if doc_id not in self._doc_index:
            raise KeyError(f"unknown document id {doc_id!r}")
        return node.doc_occurrences.get(doc_id, 0)

    def leaf_count(self) -> int:
        return sum(1 for n in self.nodes if n.is_leaf)

    def expected_leaf_count(self) -> int:
        # One leaf per suffix, terminator suffix included.
        return sum(len(seq) for seq in self._seqs)

    def substring_statistics(self) -> Iterator[tuple[tuple[str, ...], Hashable, int]]:
        """Yield (phrase, doc_id, count) for every substring position.

        Positions ending mid-edge share the statistics of the node at the
        lower end of the edge, since nothing branches inside an edge.
        Together the yielded triples enumerate every (substring, document)
        occurrence count in the indexed collection, each exactly once.
        """
        for node in self.nodes[1:]:
            prefix = self.phrase_of(node.parent)
            edge = self._edge_words(node)
            for depth in range(1, len(edge) + 1):
                phrase = prefix + tuple(edge[:depth])
                for doc, count in node.doc_occurrences.items():
                    yield phrase, doc, count

    def dump(self) -> str:
        """Indented debug rendering: one node per line with phrase,
        document support and per-document counts."""
        lines: list[str] = []

        def render(node_id: int, depth: int) -> None:
            node = self.nodes[node_id]
            phrase = " ".join(self.phrase_of(node_id)) or "(root)"
            counts = ", ".join(
                f"{doc}:{node.doc_occurrences[doc]}" for doc in node.doc_occurrences
            )
            lines.append(f"{'  ' * depth}{phrase} [docs={len(node.doc_occurrences)}] {{{counts}}}")
            for child_id in node.children.values():
                render(child_id, depth + 1)

        render(0, 0)
        return "\n".join(lines)
