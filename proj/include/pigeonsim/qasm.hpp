#pragma once

// Strict OpenQASM 2.0 subset reader and writer.
//
//   program    = "OPENQASM" "2.0" ";" { statement } ;
//   statement  = "include" STRING ";"
//              | ("qreg" | "creg") ID "[" INT "]" ";"
//              | gate_call
//              | "measure" arg "->" arg ";"
//              | "if" "(" ID "==" INT ")" gate_call
//              | "barrier" arg { "," arg } ";" ;
//   gate_call  = ("h" | "s" | "sdg" | "x" | "z" | "cx") arg { "," arg } ";" ;
//   arg        = ID [ "[" INT "]" ] ;
//
// A bare register argument broadcasts over the register. Registers are
// flattened to one index space in declaration order. An `if` must name a
// 1-bit creg, which maps onto the IR's single-bit condition.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pigeonsim/circuit.hpp"
#include "pigeonsim/error.hpp"
#include "pigeonsim/simcore.hpp"

namespace pigeonsim {

namespace qasm_detail {

enum class Tok { Ident, Int, Real, String, Symbol, End };

struct Token {
    Tok type;
    std::string text;
    std::size_t line;
    std::size_t column;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        const std::size_t tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            Tok type = Tok::Int;
            if (j < src.size() && src[j] == '.') {
                ++j;
                if (j >= src.size() || !std::isdigit(static_cast<unsigned char>(src[j])))
                    throw QasmError(QasmErrorKind::Lexical, tl, tc, "malformed number");
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                    ++j;
                type = Tok::Real;
            }
            out.push_back({type, std::string(src.substr(i, j - i)), tl, tc});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"' && src[j] != '\n')
                ++j;
            if (j >= src.size() || src[j] != '"')
                throw QasmError(QasmErrorKind::Lexical, tl, tc, "unterminated string");
            out.push_back({Tok::String, std::string(src.substr(i + 1, j - i - 1)), tl, tc});
            advance(j + 1 - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Symbol, "->", tl, tc});
            advance(2);
            continue;
        }
        if (c == '=' && i + 1 < src.size() && src[i + 1] == '=') {
            out.push_back({Tok::Symbol, "==", tl, tc});
            advance(2);
            continue;
        }
        if (std::string_view(";[],(){}").find(c) != std::string_view::npos) {
            out.push_back({Tok::Symbol, std::string(1, c), tl, tc});
            advance(1);
            continue;
        }
        throw QasmError(QasmErrorKind::Lexical, tl, tc,
                        std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

inline std::optional<GateKind> gate_from_name(std::string_view name) {
    for (GateKind k : kAllGateKinds)
        if (gate_name(k) == name)
            return k;
    return std::nullopt;
}

struct Register {
    std::size_t offset;
    std::size_t size;
};

/// A resolved argument: either one index or a whole register.
struct Arg {
    std::size_t offset;
    std::size_t size;
    bool whole;
    const Token *where;
};

class Parser {
  public:
    Parser(std::vector<Token> toks, std::string name) : toks_(std::move(toks)), name_(std::move(name)) {}

    Circuit parse() {
        expect_ident("OPENQASM");
        const Token &ver = next();
        if (ver.type != Tok::Real || ver.text != "2.0")
            fail(QasmErrorKind::Syntax, ver, "expected version 2.0, got '" + ver.text + "'");
        expect_symbol(";");
        while (peek().type != Tok::End)
            statement();

        Circuit circuit(num_qubits_, num_clbits_, name_);
        for (auto &inst : body_)
            circuit.append(std::move(inst));
        if (num_qubits_ == 0)
            fail(QasmErrorKind::Semantic, peek(), "no qubits declared");
        const auto diags = validate(circuit);
        if (!diags.empty()) {
            const auto &d = diags.front();
            const Token &at = d.position < positions_.size() ? *positions_[d.position] : peek();
            fail(QasmErrorKind::Semantic, at, d.message);
        }
        return circuit;
    }

  private:
    const Token &peek() const { return toks_[pos_]; }
    const Token &next() {
        const Token &t = toks_[pos_];
        if (t.type != Tok::End)
            ++pos_;
        return t;
    }

    [[noreturn]] static void fail(QasmErrorKind kind, const Token &at, const std::string &msg) {
        throw QasmError(kind, at.line, at.column, msg);
    }

    static std::string describe(const Token &t) {
        return t.type == Tok::End ? std::string("end of input") : "'" + t.text + "'";
    }

    void expect_symbol(std::string_view sym) {
        const Token &t = next();
        if (t.type != Tok::Symbol || t.text != sym)
            fail(QasmErrorKind::Syntax, t, "expected '" + std::string(sym) + "', got " + describe(t));
    }

    void expect_ident(std::string_view word) {
        const Token &t = next();
        if (t.type != Tok::Ident || t.text != word)
            fail(QasmErrorKind::Syntax, t, "expected '" + std::string(word) + "', got " + describe(t));
    }

    const Token &expect(Tok type, std::string_view what) {
        const Token &t = next();
        if (t.type != type)
            fail(QasmErrorKind::Syntax, t, "expected " + std::string(what) + ", got " + describe(t));
        return t;
    }

    std::size_t parse_int(const Token &t) {
        if (t.text.size() > 9)
            fail(QasmErrorKind::Semantic, t, "integer " + t.text + " too large");
        return static_cast<std::size_t>(std::stoul(t.text));
    }

    void statement() {
        const Token &head = next();
        if (head.type != Tok::Ident)
            fail(QasmErrorKind::Syntax, head, "expected a statement, got " + describe(head));
        if (head.text == "include") {
            expect(Tok::String, "file name");
            expect_symbol(";");
        } else if (head.text == "qreg" || head.text == "creg") {
            declaration(head);
        } else if (head.text == "measure") {
            measure(head);
        } else if (head.text == "barrier") {
            barrier(head);
        } else if (head.text == "if") {
            conditional();
        } else if (head.text == "gate" || head.text == "opaque") {
            fail(QasmErrorKind::UnsupportedGate, head, "custom gate definitions are not supported");
        } else {
            gate_call(head, std::nullopt);
        }
    }

    void declaration(const Token &head) {
        const bool quantum = head.text == "qreg";
        const Token &name = expect(Tok::Ident, "register name");
        expect_symbol("[");
        const Token &size_tok = expect(Tok::Int, "register size");
        expect_symbol("]");
        expect_symbol(";");
        const std::size_t size = parse_int(size_tok);
        if (size == 0)
            fail(QasmErrorKind::Semantic, size_tok, "register '" + name.text + "' has size 0");
        if (qregs_.count(name.text) || cregs_.count(name.text))
            fail(QasmErrorKind::Semantic, name, "register '" + name.text + "' already declared");
        if (quantum) {
            if (num_qubits_ + size > kMaxQubits)
                fail(QasmErrorKind::Semantic, size_tok,
                     "more than " + std::to_string(kMaxQubits) + " qubits declared");
            qregs_[name.text] = {num_qubits_, size};
            num_qubits_ += size;
        } else {
            if (num_clbits_ + size > kMaxClbits)
                fail(QasmErrorKind::Semantic, size_tok,
                     "more than " + std::to_string(kMaxClbits) + " classical bits declared");
            cregs_[name.text] = {num_clbits_, size};
            num_clbits_ += size;
        }
    }

    Arg argument(bool quantum) {
        const Token &name = expect(Tok::Ident, quantum ? "qubit argument" : "classical argument");
        const auto &regs = quantum ? qregs_ : cregs_;
        const auto it = regs.find(name.text);
        if (it == regs.end())
            fail(QasmErrorKind::Semantic, name,
                 std::string("undeclared ") + (quantum ? "qreg" : "creg") + " '" + name.text + "'");
        if (peek().type == Tok::Symbol && peek().text == "[") {
            next();
            const Token &idx_tok = expect(Tok::Int, "index");
            expect_symbol("]");
            const std::size_t idx = parse_int(idx_tok);
            if (idx >= it->second.size)
                fail(QasmErrorKind::Semantic, idx_tok,
                     "index " + std::to_string(idx) + " out of range for '" + name.text + "[" +
                         std::to_string(it->second.size) + "]'");
            return {it->second.offset + idx, 1, false, &name};
        }
        return {it->second.offset, it->second.size, true, &name};
    }

    std::vector<Arg> argument_list(bool quantum) {
        std::vector<Arg> args{argument(quantum)};
        while (peek().type == Tok::Symbol && peek().text == ",") {
            next();
            args.push_back(argument(quantum));
        }
        return args;
    }

    /// Expands register arguments; all whole-register arguments must agree in size.
    std::vector<std::vector<std::size_t>> broadcast(const std::vector<Arg> &args) {
        std::size_t width = 1;
        for (const Arg &a : args) {
            if (!a.whole)
                continue;
            if (width != 1 && a.size != width)
                fail(QasmErrorKind::Semantic, *a.where, "register size mismatch in broadcast");
            width = a.size;
        }
        std::vector<std::vector<std::size_t>> rows;
        for (std::size_t k = 0; k < width; ++k) {
            std::vector<std::size_t> row;
            for (const Arg &a : args)
                row.push_back(a.offset + (a.whole ? k : 0));
            rows.push_back(std::move(row));
        }
        return rows;
    }

    void emit(Instruction inst, const Token &at) {
        body_.push_back(std::move(inst));
        positions_.push_back(&at);
    }

    void gate_call(const Token &head, std::optional<Condition> condition) {
        const auto kind = gate_from_name(head.text);
        if (!kind)
            fail(QasmErrorKind::UnsupportedGate, head, "unsupported gate '" + head.text + "'");
        const auto args = argument_list(true);
        expect_symbol(";");
        if (args.size() != arity(*kind))
            fail(QasmErrorKind::Semantic, head,
                 head.text + " expects " + std::to_string(arity(*kind)) + " argument(s), got " +
                     std::to_string(args.size()));
        for (auto &qubits : broadcast(args)) {
            if (condition)
                emit(ConditionalGate{*kind, std::move(qubits), *condition}, head);
            else
                emit(Gate{*kind, std::move(qubits)}, head);
        }
    }

    void measure(const Token &head) {
        const Arg q = argument(true);
        expect_symbol("->");
        const Arg c = argument(false);
        expect_symbol(";");
        if (q.size != c.size)
            fail(QasmErrorKind::Semantic, head, "measure register sizes differ");
        for (std::size_t k = 0; k < q.size; ++k)
            emit(Measure{q.offset + k, c.offset + k}, head);
    }

    void barrier(const Token &head) {
        const auto args = argument_list(true);
        expect_symbol(";");
        std::vector<std::size_t> qubits;
        for (const Arg &a : args)
            for (std::size_t k = 0; k < a.size; ++k)
                qubits.push_back(a.offset + k);
        emit(Barrier{std::move(qubits)}, head);
    }

    void conditional() {
        expect_symbol("(");
        const Token &name = expect(Tok::Ident, "creg name");
        expect_symbol("==");
        const Token &value_tok = expect(Tok::Int, "integer");
        expect_symbol(")");
        const auto it = cregs_.find(name.text);
        if (it == cregs_.end())
            fail(QasmErrorKind::Semantic, name, "undeclared creg '" + name.text + "'");
        if (it->second.size != 1)
            fail(QasmErrorKind::Semantic, name,
                 "condition on multi-bit creg '" + name.text + "' is not supported");
        const std::size_t value = parse_int(value_tok);
        if (value > 1)
            fail(QasmErrorKind::Semantic, value_tok, "1-bit creg compared with " + value_tok.text);
        const Token &gate = expect(Tok::Ident, "gate name");
        gate_call(gate, Condition{it->second.offset, static_cast<int>(value)});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::string name_;
    std::map<std::string, Register> qregs_;
    std::map<std::string, Register> cregs_;
    std::size_t num_qubits_ = 0;
    std::size_t num_clbits_ = 0;
    std::vector<Instruction> body_;
    std::vector<const Token *> positions_;
};

} // namespace qasm_detail

/// Throws QasmError carrying kind and line:column on any rejection.
inline Circuit parse_qasm(std::string_view text, std::string name = "qasm") {
    qasm_detail::Parser parser(qasm_detail::tokenize(text), std::move(name));
    return parser.parse();
}

/// Deterministic text: one statement per line, qreg `q`, and creg `c` unless
/// the circuit has conditional gates, in which case every classical bit k gets
/// its own 1-bit register `c<k>` so the condition can name it.
inline std::string export_qasm(const Circuit &circuit) {
    const auto diags = validate(circuit);
    if (!diags.empty())
        throw InvalidInstructionError("cannot export invalid circuit:\n" + format_diagnostics(diags));

    bool split_cregs = false;
    for (const auto &inst : circuit.instructions())
        split_cregs = split_cregs || std::holds_alternative<ConditionalGate>(inst);

    auto clbit_ref = [&](std::size_t k) {
        return split_cregs ? "c" + std::to_string(k) + "[0]" : "c[" + std::to_string(k) + "]";
    };
    auto qubit_list = [](const std::vector<std::size_t> &qubits) {
        std::string s;
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if (k)
                s += ',';
            s += "q[" + std::to_string(qubits[k]) + "]";
        }
        return s;
    };

    std::ostringstream os;
    os << "OPENQASM 2.0;\n";
    os << "include \"qelib1.inc\";\n";
    os << "qreg q[" << circuit.num_qubits() << "];\n";
    if (split_cregs) {
        for (std::size_t k = 0; k < circuit.num_clbits(); ++k)
            os << "creg c" << k << "[1];\n";
    } else if (circuit.num_clbits() > 0) {
        os << "creg c[" << circuit.num_clbits() << "];\n";
    }
    for (const auto &inst : circuit.instructions()) {
        if (const auto *g = std::get_if<Gate>(&inst)) {
            os << gate_name(g->kind) << ' ' << qubit_list(g->qubits) << ";\n";
        } else if (const auto *m = std::get_if<Measure>(&inst)) {
            os << "measure q[" << m->qubit << "] -> " << clbit_ref(m->clbit) << ";\n";
        } else if (const auto *c = std::get_if<ConditionalGate>(&inst)) {
            os << "if(c" << c->condition.clbit << "==" << c->condition.value << ") "
               << gate_name(c->kind) << ' ' << qubit_list(c->qubits) << ";\n";
        } else if (const auto *b = std::get_if<Barrier>(&inst)) {
            os << "barrier " << qubit_list(b->qubits) << ";\n";
        }
    }
    return os.str();
}

} // namespace pigeonsim
