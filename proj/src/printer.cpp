#include <sstream>

#include "alambda/syntax.hpp"

namespace alambda {

namespace {

// A λ on the right spine of a summand would swallow a following '+ ...',
// since abstraction bodies extend maximally to the right.
bool right_spine_lam(const RawPtr& t) {
    switch (t->kind) {
    case RawTerm::Kind::Lam: return true;
    case RawTerm::Kind::App:
    case RawTerm::Kind::Sum: return right_spine_lam(t->right);
    case RawTerm::Kind::Scale: return right_spine_lam(t->left);
    default: return false;
    }
}

class Printer {
public:
    explicit Printer(const RawPtr& root) { collect_free_vars(root, avoid_); }

    std::string term(const RawPtr& t) {
        std::ostringstream os;
        sum(os, t, /*final=*/true);
        return os.str();
    }

private:
    void sum(std::ostream& os, const RawPtr& t, bool final) {
        if (t->kind == RawTerm::Kind::Sum) {
            sum(os, t->left, false);
            os << " + ";
            // the parser folds '+' to the left; a right-nested sum keeps its
            // shape only behind parentheses
            if (t->right->kind == RawTerm::Kind::Sum) {
                os << '(';
                sum(os, t->right, true);
                os << ')';
            } else {
                sum(os, t->right, final);
            }
            return;
        }
        bool parens = !final && right_spine_lam(t);
        if (parens) os << '(';
        scale(os, t);
        if (parens) os << ')';
    }

    void scale(std::ostream& os, const RawPtr& t) {
        if (t->kind == RawTerm::Kind::Scale) {
            os << t->coeff->str() << '.';
            if (t->left->kind == RawTerm::Kind::Sum) {
                os << '(';
                sum(os, t->left, true);
                os << ')';
            } else {
                scale(os, t->left);
            }
            return;
        }
        app(os, t);
    }

    void app(std::ostream& os, const RawPtr& t) {
        switch (t->kind) {
        case RawTerm::Kind::App:
            os << '(';
            sum(os, t->left, true);
            os << ')';
            atom(os, t->right);
            return;
        case RawTerm::Kind::Lam: {
            std::string x = binder_name();
            os << "λ" << x << '.';
            names_.push_back(x);
            sum(os, t->left, true);
            names_.pop_back();
            return;
        }
        default:
            atom(os, t);
        }
    }

    void atom(std::ostream& os, const RawPtr& t) {
        switch (t->kind) {
        case RawTerm::Kind::FreeVar: os << t->name; return;
        case RawTerm::Kind::BoundVar: {
            int i = t->index;
            if (i >= 0 && i < static_cast<int>(names_.size()))
                os << names_[names_.size() - 1 - i];
            else
                os << '#' << i; // dangling index, debug rendering only
            return;
        }
        case RawTerm::Kind::Zero: os << '0'; return;
        case RawTerm::Kind::App:
        case RawTerm::Kind::Lam: app(os, t); return;
        default:
            os << '(';
            sum(os, t, true);
            os << ')';
            return;
        }
    }

    std::string binder_name() {
        std::set<std::string> avoid = avoid_;
        avoid.insert(names_.begin(), names_.end());
        return fresh_name(avoid);
    }

    std::set<std::string> avoid_;
    std::vector<std::string> names_; // enclosing binders, innermost last
};

} // namespace

std::string print(const RawPtr& t) { return Printer(t).term(t); }

std::string print(const PurePtr& t) { return print(from_pure(t)); }

} // namespace alambda
