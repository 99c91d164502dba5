#include "varex/formula_text.hpp"

#include <cctype>

#include "varex/errors.hpp"

namespace varex {

namespace {

bool is_atomic(const Formula &f) {
    switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Var:
    case Formula::Kind::Not:
        return true;
    default:
        return false;
    }
}

void print(const Formula &f, std::string &out) {
    switch (f.kind()) {
    case Formula::Kind::True:
        out += "true";
        break;
    case Formula::Kind::False:
        out += "false";
        break;
    case Formula::Kind::Var:
        out += f.name();
        break;
    case Formula::Kind::Not:
        out += '!';
        if (is_atomic(f.operand())) {
            print(f.operand(), out);
        } else {
            out += '(';
            print(f.operand(), out);
            out += ')';
        }
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char *sep = f.kind() == Formula::Kind::And ? " && " : " || ";
        bool first = true;
        for (const auto &op : f.operands()) {
            if (!first)
                out += sep;
            first = false;
            if (is_atomic(op)) {
                print(op, out);
            } else {
                out += '(';
                print(op, out);
                out += ')';
            }
        }
        break;
    }
    }
}

class Parser {
public:
    explicit Parser(const std::string &text) : text_(text) {}

    Formula parse() {
        Formula f = parse_or();
        skip_ws();
        if (pos_ != text_.size())
            throw FormulaSyntaxError("trailing input at position " + std::to_string(pos_) +
                                     " in '" + text_ + "'");
        return f;
    }

private:
    Formula parse_or() {
        std::vector<Formula> terms{parse_and()};
        while (accept("||"))
            terms.push_back(parse_and());
        return terms.size() == 1 ? terms[0] : Formula::disjunction(std::move(terms));
    }

    Formula parse_and() {
        std::vector<Formula> terms{parse_unary()};
        while (accept("&&"))
            terms.push_back(parse_unary());
        return terms.size() == 1 ? terms[0] : Formula::conjunction(std::move(terms));
    }

    Formula parse_unary() {
        skip_ws();
        if (accept("!"))
            return Formula::negation(parse_unary());
        if (accept("(")) {
            Formula f = parse_or();
            if (!accept(")"))
                throw FormulaSyntaxError("expected ')' in '" + text_ + "'");
            return f;
        }
        std::string ident = read_identifier();
        if (ident.empty())
            throw FormulaSyntaxError("expected identifier at position " + std::to_string(pos_) +
                                     " in '" + text_ + "'");
        if (ident == "true")
            return Formula::true_const();
        if (ident == "false")
            return Formula::false_const();
        return Formula::var(ident);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(const std::string &token) {
        skip_ws();
        if (text_.compare(pos_, token.size(), token) == 0) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    std::string read_identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
                ++pos_;
            else
                break;
        }
        return text_.substr(start, pos_ - start);
    }

    const std::string &text_;
    std::size_t pos_ = 0;
};

} // namespace

std::string to_string(const Formula &f) {
    std::string out;
    print(f, out);
    return out;
}

Formula parse_formula(const std::string &text) { return Parser(text).parse(); }

} // namespace varex
