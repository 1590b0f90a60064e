#include "psalg/parser.hpp"

#include <cctype>

namespace psalg {

namespace {

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type = Type::End;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& current() const { return tok_; }

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) consume();
        tok_.line = line_;
        tok_.column = column_;
        if (pos_ >= text_.size()) {
            tok_.type = Token::Type::End;
            tok_.text.clear();
            return;
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok_.type = Token::Type::Number;
            tok_.text.clear();
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                tok_.text += text_[pos_];
                consume();
            }
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            tok_.type = Token::Type::Ident;
            tok_.text.clear();
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                tok_.text += text_[pos_];
                consume();
            }
            return;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, c);
            consume();
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    void consume() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token tok_;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) {}

    Ast parse() {
        Ast root = parseSum();
        const Token& t = lex_.current();
        if (t.type != Token::Type::End)
            throw ParseError("unexpected trailing input '" + t.text + "'", t.line, t.column);
        return root;
    }

private:
    bool isOp(const char* text) const {
        return lex_.current().type == Token::Type::Op && lex_.current().text == text;
    }

    Ast parseSum() {
        Ast lhs = parseProduct();
        while (isOp("+") || isOp("-")) {
            char op = lex_.current().text[0];
            Token t = lex_.current();
            lex_.advance();
            Ast node;
            node.kind = Ast::Kind::Binary;
            node.op = op;
            node.line = t.line;
            node.column = t.column;
            node.children.push_back(std::move(lhs));
            node.children.push_back(parseProduct());
            lhs = std::move(node);
        }
        return lhs;
    }

    Ast parseProduct() {
        Ast lhs = parseUnary();
        while (isOp("*") || isOp("/")) {
            char op = lex_.current().text[0];
            Token t = lex_.current();
            lex_.advance();
            Ast node;
            node.kind = Ast::Kind::Binary;
            node.op = op;
            node.line = t.line;
            node.column = t.column;
            node.children.push_back(std::move(lhs));
            node.children.push_back(parseUnary());
            lhs = std::move(node);
        }
        return lhs;
    }

    Ast parseUnary() {
        if (isOp("-")) {
            Token t = lex_.current();
            lex_.advance();
            Ast node;
            node.kind = Ast::Kind::Neg;
            node.line = t.line;
            node.column = t.column;
            node.children.push_back(parseUnary());
            return node;
        }
        return parsePower();
    }

    Ast parsePower() {
        Ast base = parsePrimary();
        while (isOp("^")) {
            Token t = lex_.current();
            lex_.advance();
            Ast node;
            node.kind = Ast::Kind::Binary;
            node.op = '^';
            node.line = t.line;
            node.column = t.column;
            node.children.push_back(std::move(base));
            node.children.push_back(parseExponent());
            base = std::move(node);
        }
        return base;
    }

    // The exponent must be a non-negative integer literal, with optional
    // grouping parentheses; anything else (including a negative literal) is
    // a syntax error.
    Ast parseExponent() {
        const Token& t = lex_.current();
        if (t.type == Token::Type::Op && t.text == "(") {
            lex_.advance();
            Ast inner = parseExponent();
            if (!isOp(")"))
                throw ParseError("expected ')' after exponent", lex_.current().line,
                                 lex_.current().column);
            lex_.advance();
            return inner;
        }
        if (t.type == Token::Type::Op && t.text == "-")
            throw ParseError("negative exponent literal not allowed", t.line, t.column);
        if (t.type != Token::Type::Number)
            throw ParseError("exponent must be a non-negative integer literal", t.line, t.column);
        Ast node;
        node.kind = Ast::Kind::Number;
        node.number = rationalFromString(t.text);
        node.line = t.line;
        node.column = t.column;
        lex_.advance();
        return node;
    }

    Ast parsePrimary() {
        const Token t = lex_.current();
        if (t.type == Token::Type::Number) {
            lex_.advance();
            Ast node;
            node.kind = Ast::Kind::Number;
            node.number = rationalFromString(t.text);
            node.line = t.line;
            node.column = t.column;
            return node;
        }
        if (t.type == Token::Type::Ident) {
            lex_.advance();
            return identNode(t);
        }
        if (t.type == Token::Type::Op && t.text == "(") {
            lex_.advance();
            Ast inner = parseSum();
            if (!isOp(")"))
                throw ParseError("expected ')'", lex_.current().line, lex_.current().column);
            lex_.advance();
            return inner;
        }
        throw ParseError(t.type == Token::Type::End ? "unexpected end of input"
                                                    : "unexpected token '" + t.text + "'",
                         t.line, t.column);
    }

    static Ast identNode(const Token& t) {
        Ast node;
        node.line = t.line;
        node.column = t.column;
        const std::string& name = t.text;
        if (name == "i" || name == "s" || name == "u" || name == "hbar") {
            node.kind = Ast::Kind::Constant;
            node.constant = (name == "hbar") ? 'h' : name[0];
            return node;
        }
        if ((name[0] == 'x' || name[0] == 'p') && name.size() > 1) {
            bool digits = true;
            for (std::size_t k = 1; k < name.size(); ++k)
                if (!std::isdigit(static_cast<unsigned char>(name[k]))) digits = false;
            if (digits) {
                int idx = std::stoi(name.substr(1));
                node.kind = Ast::Kind::Variable;
                node.variable = (name[0] == 'x') ? Var::x(idx) : Var::p(idx);
                return node;
            }
        }
        throw ParseError("unknown identifier '" + name + "'", t.line, t.column);
    }

    Lexer lex_;
};

} // namespace

Ast parseAst(const std::string& text) { return Parser(text).parse(); }

PhaseExpr lowerAst(const Ast& ast, const Context& ctx) {
    switch (ast.kind) {
        case Ast::Kind::Number:
            return PhaseExpr::fromRational(ctx, ast.number);
        case Ast::Kind::Constant:
            switch (ast.constant) {
                case 'i': return PhaseExpr::imaginaryUnit(ctx);
                case 'h': return PhaseExpr::hbar(ctx);
                case 's': return PhaseExpr::s(ctx);
                default: return PhaseExpr::u(ctx);
            }
        case Ast::Kind::Variable:
            if (ast.variable.index < 1 || ast.variable.index > ctx.dim())
                throw ParseError("variable " + ast.variable.name() + " out of range for n = " +
                                     std::to_string(ctx.dim()),
                                 ast.line, ast.column);
            return PhaseExpr::variable(ctx, ast.variable);
        case Ast::Kind::Neg:
            return -lowerAst(ast.children[0], ctx);
        case Ast::Kind::Binary: {
            PhaseExpr lhs = lowerAst(ast.children[0], ctx);
            switch (ast.op) {
                case '+': return lhs + lowerAst(ast.children[1], ctx);
                case '-': return lhs - lowerAst(ast.children[1], ctx);
                case '*': return lhs * lowerAst(ast.children[1], ctx);
                case '/': {
                    PhaseExpr rhs = lowerAst(ast.children[1], ctx);
                    if (rhs.isZero()) throw ParseError("division by zero", ast.line, ast.column);
                    return divide(lhs, rhs);
                }
                default: {
                    const Rational& e = ast.children[1].number;
                    if (e.get_den() != 1 || e < 0)
                        throw ParseError("exponent must be a non-negative integer", ast.line,
                                         ast.column);
                    if (!e.get_num().fits_sint_p())
                        throw ParseError("exponent too large", ast.line, ast.column);
                    return lhs.intPow(static_cast<int>(e.get_num().get_si()));
                }
            }
        }
    }
    throw Error("unreachable AST kind");
}

} // namespace psalg
