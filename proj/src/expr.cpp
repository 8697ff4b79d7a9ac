#include "dj/expr.hpp"

#include <cctype>

#include "dj/error.hpp"

namespace dj {

namespace {

class Parser {
public:
    Parser(const std::string& text, ChartPtr chart) : text_(text), chart_(std::move(chart)) {}

    Scalar run() {
        Scalar v = expr();
        skip_ws();
        if (pos_ != text_.size()) bail("trailing input");
        return v;
    }

private:
    const std::string& text_;
    ChartPtr chart_;
    size_t pos_ = 0;

    [[noreturn]] void bail(const std::string& what) {
        fail(Errc::ParseError, what + " at offset " + std::to_string(pos_) + " in '" + text_ + "'");
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Scalar expr() {
        Scalar v = term();
        while (true) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }

    Scalar term() {
        Scalar v = unary();
        while (true) {
            if (eat('*')) v = v * unary();
            else if (eat('/')) {
                Scalar d = unary();
                if (d.is_zero()) bail("division by zero");
                v = v / d;
            } else return v;
        }
    }

    Scalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Scalar power() {
        Scalar base = atom();
        if (!eat('^')) return base;
        bool negexp = eat('-');
        long e = integer_literal();
        if (negexp && base.is_zero()) bail("zero to a negative power");
        return base.pow(static_cast<int>(negexp ? -e : e));
    }

    long integer_literal() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) bail("expected integer");
        return std::stol(text_.substr(start, pos_ - start));
    }

    Scalar atom() {
        skip_ws();
        if (pos_ >= text_.size()) bail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            Rat v(text_.substr(start, pos_ - start));
            return Scalar::rational(chart_, v);
        }
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            if (!eat(')')) bail("expected ')'");
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (name == "i") return Scalar::constant(chart_, GQ::i());
            return Scalar::generator(chart_, name); // coord, unit or tau; throws UnknownCoordinate
        }
        bail("unexpected character");
    }
};

} // namespace

Scalar parse_scalar(const std::string& text, const ChartPtr& chart) {
    return Parser(text, chart).run();
}

} // namespace dj
