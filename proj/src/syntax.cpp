#include "sx/syntax.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_set>

namespace sx {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

struct NodeKeyHash {
    std::size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeKeyEq {
    bool operator()(const Node* a, const Node* b) const {
        return a->kind == b->kind && a->act == b->act && a->l == b->l && a->r == b->r;
    }
};

struct ExpTable {
    std::mutex mu;
    std::deque<Node> store;
    std::unordered_set<const Node*, NodeKeyHash, NodeKeyEq> set;
};

ExpTable& table() {
    static ExpTable* t = new ExpTable();
    return *t;
}

Exp intern(Kind k, char a, Exp l, Exp r) {
    Node probe{};
    probe.kind = k;
    probe.act = a;
    probe.l = l;
    probe.r = r;
    std::size_t h = mix(static_cast<std::size_t>(k), static_cast<unsigned char>(a));
    if (l) h = mix(h, l->hash);
    if (r) h = mix(h, r->hash);
    probe.hash = h;
    auto& t = table();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.set.find(&probe);
    if (it != t.set.end()) return *it;
    switch (k) {
        case Kind::Zero:
        case Kind::Act:
            probe.size = 1; probe.height = 0; probe.term = false; break;
        case Kind::One:
            probe.size = 1; probe.height = 0; probe.term = true; break;
        case Kind::Sum:
            probe.size = 1 + l->size + r->size;
            probe.height = std::max(l->height, r->height);
            probe.term = l->term || r->term;
            break;
        case Kind::Prod:
            probe.size = 1 + l->size + r->size;
            probe.height = std::max(l->height, r->height);
            probe.term = l->term && r->term;
            break;
        case Kind::Star:
            probe.size = 1 + l->size;
            probe.height = static_cast<std::uint16_t>(l->height + 1);
            probe.term = true;
            break;
    }
    t.store.push_back(probe);
    const Node* n = &t.store.back();
    t.set.insert(n);
    return n;
}

}  // namespace

Exp zero() { static Exp z = intern(Kind::Zero, 0, nullptr, nullptr); return z; }
Exp one() { static Exp o = intern(Kind::One, 0, nullptr, nullptr); return o; }
Exp act(char a) {
    if (a < 'a' || a > 'z') throw std::invalid_argument(std::string("bad action name: ") + a);
    return intern(Kind::Act, a, nullptr, nullptr);
}
Exp sum(Exp l, Exp r) { return intern(Kind::Sum, 0, l, r); }
Exp prod(Exp l, Exp r) { return intern(Kind::Prod, 0, l, r); }
Exp star(Exp b) { return intern(Kind::Star, 0, b, nullptr); }

Exp sum_of(const std::vector<Exp>& xs) {
    if (xs.empty()) return zero();
    Exp acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = sum(acc, xs[i]);
    return acc;
}

std::size_t star_height(Exp e) { return e->height; }
bool terminates(Exp e) { return e->term; }
std::size_t exp_size(Exp e) { return e->size; }

int compare(Exp a, Exp b) {
    while (a != b) {
        if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
        switch (a->kind) {
            case Kind::Zero:
            case Kind::One:
                return 0;
            case Kind::Act:
                return a->act < b->act ? -1 : (a->act > b->act ? 1 : 0);
            case Kind::Star:
                a = a->l;
                b = b->l;
                continue;
            default: {
                int c = compare(a->l, b->l);
                if (c != 0) return c;
                a = a->r;
                b = b->r;
                continue;
            }
        }
    }
    return 0;
}

namespace {

int prec(Kind k) {
    switch (k) {
        case Kind::Sum: return 0;
        case Kind::Prod: return 1;
        default: return 2;
    }
}

void print_rec(Exp e, int ctx, std::string& out) {
    bool par = prec(e->kind) < ctx;
    if (par) out += '(';
    switch (e->kind) {
        case Kind::Zero: out += '0'; break;
        case Kind::One: out += '1'; break;
        case Kind::Act: out += e->act; break;
        case Kind::Sum:
            print_rec(e->l, 0, out);
            out += '+';
            print_rec(e->r, 1, out);
            break;
        case Kind::Prod:
            print_rec(e->l, 1, out);
            out += '.';
            print_rec(e->r, 2, out);
            break;
        case Kind::Star:
            print_rec(e->l, 2, out);
            out += '*';
            break;
    }
    if (par) out += ')';
}

}  // namespace

std::string print(Exp e) {
    std::string s;
    print_rec(e, 0, s);
    return s;
}

void collect_actions(Exp e, std::vector<char>& out) {
    switch (e->kind) {
        case Kind::Act:
            if (std::find(out.begin(), out.end(), e->act) == out.end()) out.push_back(e->act);
            break;
        case Kind::Sum:
        case Kind::Prod:
            collect_actions(e->l, out);
            collect_actions(e->r, out);
            break;
        case Kind::Star:
            collect_actions(e->l, out);
            break;
        default: break;
    }
}

// ---- parser (shared by plain and stacked syntax) ----

namespace {

struct PV {
    Exp e = nullptr;   // set when pure
    SExp s = nullptr;  // set when stacked
};

class Parser {
public:
    Parser(std::string_view t, bool hash) : text_(t), allow_hash_(hash) {}

    PV run() {
        PV v = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected character");
        return v;
    }

private:
    std::string_view text_;
    bool allow_hash_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(msg, pos_); }

    void skip() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }
    int peek() {
        skip();
        return pos_ < text_.size() ? static_cast<unsigned char>(text_[pos_]) : -1;
    }

    PV expr() {
        PV l = prod_();
        while (peek() == '+') {
            std::size_t at = pos_;
            ++pos_;
            PV r = prod_();
            if (l.s || r.s) throw SyntaxError("stacked expression under '+'", at);
            l.e = sum(l.e, r.e);
        }
        return l;
    }

    PV prod_() {
        PV l = star_();
        for (;;) {
            int c = peek();
            if (c == '.') {
                std::size_t at = pos_;
                ++pos_;
                PV r = star_();
                if (r.s) throw SyntaxError("stacked expression as right factor", at);
                if (l.s) l.s = prods(l.s, r.e);
                else l.e = prod(l.e, r.e);
            } else if (c == '#' && allow_hash_) {
                std::size_t at = pos_;
                ++pos_;
                PV r = star_();
                if (r.s || r.e->kind != Kind::Star) throw SyntaxError("right of '#' must be an iteration", at);
                SExp left = l.s ? l.s : pure(l.e);
                l.s = stackprod(left, r.e->l);
                l.e = nullptr;
            } else {
                break;
            }
        }
        return l;
    }

    PV star_() {
        PV v = atom();
        while (peek() == '*') {
            if (v.s) fail("iteration of a stacked expression");
            ++pos_;
            v.e = star(v.e);
        }
        return v;
    }

    PV atom() {
        int c = peek();
        PV v;
        if (c == '0') { ++pos_; v.e = zero(); return v; }
        if (c == '1') { ++pos_; v.e = one(); return v; }
        if (c >= 'a' && c <= 'z') { ++pos_; v.e = act(static_cast<char>(c)); return v; }
        if (c == '(') {
            ++pos_;
            v = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return v;
        }
        if (c == -1) fail("unexpected end of input");
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
};

}  // namespace

Exp parse(std::string_view text) {
    PV v = Parser(text, false).run();
    return v.e;
}

// ---- stacked ----

namespace {

struct SNodeHash {
    std::size_t operator()(const SNode* n) const { return n->hash; }
};
struct SNodeEq {
    bool operator()(const SNode* a, const SNode* b) const {
        return a->kind == b->kind && a->e == b->e && a->l == b->l;
    }
};

struct STable {
    std::mutex mu;
    std::deque<SNode> store;
    std::unordered_set<const SNode*, SNodeHash, SNodeEq> set;
};

STable& stable() {
    static STable* t = new STable();
    return *t;
}

SExp sintern(SKind k, Exp e, SExp l) {
    SNode probe{};
    probe.kind = k;
    probe.e = e;
    probe.l = l;
    std::size_t h = mix(static_cast<std::size_t>(k) + 17, e->hash);
    if (l) h = mix(h, l->hash);
    probe.hash = h;
    auto& t = stable();
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.set.find(&probe);
    if (it != t.set.end()) return *it;
    t.store.push_back(probe);
    const SNode* n = &t.store.back();
    t.set.insert(n);
    return n;
}

}  // namespace

SExp pure(Exp e) { return sintern(SKind::Pure, e, nullptr); }

SExp prods(SExp l, Exp r) {
    if (l->kind == SKind::Pure) return pure(prod(l->e, r));
    return sintern(SKind::ProdS, r, l);
}

SExp stackprod(SExp l, Exp body) { return sintern(SKind::StackProd, body, l); }

bool terminates(SExp E) { return E->kind == SKind::Pure && terminates(E->e); }

Exp project(SExp E) {
    switch (E->kind) {
        case SKind::Pure: return E->e;
        case SKind::ProdS: return prod(project(E->l), E->e);
        case SKind::StackProd: return prod(project(E->l), star(E->e));
    }
    return E->e;
}

std::size_t star_height(SExp E) {
    switch (E->kind) {
        case SKind::Pure: return star_height(E->e);
        case SKind::ProdS: return std::max(star_height(E->l), star_height(E->e));
        case SKind::StackProd: return std::max(star_height(E->l), star_height(E->e) + 1);
    }
    return 0;
}

int compare(SExp a, SExp b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (a->kind != SKind::Pure) {
        int c = compare(a->l, b->l);
        if (c != 0) return c;
    }
    return compare(a->e, b->e);
}

namespace {

void sprint_rec(SExp E, int ctx, std::string& out) {
    if (E->kind == SKind::Pure) {
        print_rec(E->e, ctx, out);
        return;
    }
    bool par = ctx > 1;
    if (par) out += '(';
    sprint_rec(E->l, 1, out);
    if (E->kind == SKind::ProdS) {
        out += '.';
        print_rec(E->e, 2, out);
    } else {
        out += '#';
        print_rec(star(E->e), 2, out);
    }
    if (par) out += ')';
}

}  // namespace

std::string print(SExp E) {
    std::string s;
    sprint_rec(E, 0, s);
    return s;
}

SExp parse_stacked(std::string_view text) {
    PV v = Parser(text, true).run();
    return v.s ? v.s : pure(v.e);
}

std::string print(const FormalEq& eq) { return print(eq.lhs) + " = " + print(eq.rhs); }

}  // namespace sx
