#pragma once

#include <cstdint>
#include <vector>

namespace dtm::detail {

/// Intrusive bottom-up splay tree over nodes carrying l/r/p pointers.
/// The Pull functor refreshes a node's cached aggregate from its children;
/// it is invoked on every node whose subtree changed. Rotations are counted
/// for the amortized-cost diagnostics.
template <class Node, class Pull>
class Splay {
public:
    explicit Splay(Pull pull = Pull{}) : pull_(pull) {}

    std::uint64_t rotations = 0;

    bool is_root(const Node* x) const { return x->p == nullptr; }

    Node* root_of(Node* x) {
        while (x->p) x = x->p;
        return x;
    }

    void splay(Node* x) {
        while (x->p) {
            Node* p = x->p;
            Node* g = p->p;
            if (!g) {
                rotate(x);
            } else if ((g->l == p) == (p->l == x)) {
                rotate(p);  // zig-zig
                rotate(x);
            } else {
                rotate(x);  // zig-zag
                rotate(x);
            }
        }
        pull_(x);
    }

    /// Splays x and detaches its left subtree; returns that subtree (may be null).
    Node* split_before(Node* x) {
        splay(x);
        Node* a = x->l;
        if (a) {
            x->l = nullptr;
            a->p = nullptr;
            pull_(x);
        }
        return a;
    }

    /// Splays x and detaches its right subtree; returns that subtree (may be null).
    Node* split_after(Node* x) {
        splay(x);
        Node* b = x->r;
        if (b) {
            x->r = nullptr;
            b->p = nullptr;
            pull_(x);
        }
        return b;
    }

    /// Joins two trees (either may be null); all of a precedes all of b.
    Node* join(Node* a, Node* b) {
        if (!a) return b;
        if (!b) return a;
        Node* r = rightmost(a);
        splay(r);
        r->r = b;
        b->p = r;
        pull_(r);
        return r;
    }

    Node* leftmost(Node* x) {
        while (x->l) x = x->l;
        return x;
    }

    Node* rightmost(Node* x) {
        while (x->r) x = x->r;
        return x;
    }

    /// First element of x's tree, splayed for amortization.
    Node* first(Node* x) {
        splay(x);
        Node* f = leftmost(x);
        splay(f);
        return f;
    }

    /// Builds a balanced tree over items[lo..hi) in order; returns its root.
    Node* build_balanced(const std::vector<Node*>& items) {
        return build_range(items, 0, items.size());
    }

    void refresh(Node* x) { pull_(x); }

private:
    Node* build_range(const std::vector<Node*>& items, std::size_t lo, std::size_t hi) {
        if (lo >= hi) return nullptr;
        const std::size_t mid = lo + (hi - lo) / 2;
        Node* n = items[mid];
        n->l = build_range(items, lo, mid);
        n->r = build_range(items, mid + 1, hi);
        if (n->l) n->l->p = n;
        if (n->r) n->r->p = n;
        n->p = nullptr;
        pull_(n);
        return n;
    }

    void rotate(Node* x) {
        Node* p = x->p;
        Node* g = p->p;
        if (p->l == x) {
            p->l = x->r;
            if (x->r) x->r->p = p;
            x->r = p;
        } else {
            p->r = x->l;
            if (x->l) x->l->p = p;
            x->l = p;
        }
        p->p = x;
        x->p = g;
        if (g) {
            if (g->l == p)
                g->l = x;
            else
                g->r = x;
        }
        pull_(p);
        ++rotations;
    }

    Pull pull_;
};

}  // namespace dtm::detail
