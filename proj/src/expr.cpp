#include "dbar/expr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "dbar/error.hpp"

namespace dbar {

struct Expr::Node {
  Kind kind = Kind::kConst;
  cplx value{};
  int index = 0;
  // empty until make() fills them; a default Expr would allocate a Node itself
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
  int max_var = 0;
  std::size_t size = 1;
  bool conj_used = false;
};

namespace {

const Expr& zero_expr() {
  static const Expr z;
  return z;
}

bool is_unary(Expr::Kind k) {
  return k == Expr::Kind::kConj || k == Expr::Kind::kNeg || k == Expr::Kind::kExp ||
         k == Expr::Kind::kSin || k == Expr::Kind::kCos || k == Expr::Kind::kPow;
}

template <class C>
C ipow(C base, int n) {
  if (n < 0) {
    if (base == C(0.0)) throw NumericalError("division by zero in negative power");
    return C(1.0) / ipow(base, -n);
  }
  C result(1.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_constant(cplx c) {
  if (c.imag() == 0.0) {
    return c.real() < 0 ? "(" + format_number(c.real()) + ")" : format_number(c.real());
  }
  if (c.real() == 0.0) return "(" + format_number(c.imag()) + "i)";
  const std::string im = format_number(std::abs(c.imag())) + "i";
  return "(" + format_number(c.real()) + (c.imag() < 0 ? "-" : "+") + im + ")";
}

}  // namespace

Expr::Expr() : Expr(cplx(0.0)) {}

Expr::Expr(cplx value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kConst;
  n->value = value;
  node_ = std::move(n);
}

Expr Expr::variable(int index) {
  if (index < 1) throw ValidationError("variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->index = index;
  n->max_var = index;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr Expr::make(Kind kind, cplx value, int index, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->value = value;
  n->index = index;
  n->max_var = std::max(a.max_variable(), b.max_variable());
  n->size = 1 + a.size() + (is_unary(kind) ? 0 : b.size());
  n->conj_used = kind == Kind::kConj || a.uses_conj() || b.uses_conj();
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
cplx Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
const Expr& Expr::arg() const { return node_->a; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
int Expr::max_variable() const { return node_->max_var; }
std::size_t Expr::size() const { return node_->size; }
bool Expr::uses_conj() const { return node_->conj_used; }

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::make(Expr::Kind::kAdd, {}, 0, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return Expr::make(Expr::Kind::kSub, {}, 0, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::make(Expr::Kind::kMul, {}, 0, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && !b.is_zero()) return Expr(a.value() / b.value());
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (b.is_one()) return a;
  return Expr::make(Expr::Kind::kDiv, {}, 0, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.value());
  if (a.kind() == Expr::Kind::kNeg) return a.arg();
  return Expr::make(Expr::Kind::kNeg, {}, 0, a, zero_expr());
}

Expr conj(const Expr& a) {
  if (a.is_constant()) return Expr(std::conj(a.value()));
  if (a.kind() == Expr::Kind::kConj) return a.arg();
  return Expr::make(Expr::Kind::kConj, {}, 0, a, zero_expr());
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr(std::exp(a.value()));
  return Expr::make(Expr::Kind::kExp, {}, 0, a, zero_expr());
}

Expr sin(const Expr& a) {
  if (a.is_constant()) return Expr(std::sin(a.value()));
  return Expr::make(Expr::Kind::kSin, {}, 0, a, zero_expr());
}

Expr cos(const Expr& a) {
  if (a.is_constant()) return Expr(std::cos(a.value()));
  return Expr::make(Expr::Kind::kCos, {}, 0, a, zero_expr());
}

Expr pow(const Expr& a, int n) {
  if (n == 0) return Expr(1.0);
  if (n == 1) return a;
  if (a.is_constant() && !(a.is_zero() && n < 0)) return Expr(ipow(a.value(), n));
  return Expr::make(Expr::Kind::kPow, {}, n, a, zero_expr());
}

std::string Expr::to_string() const {
  switch (kind()) {
    case Kind::kConst:
      return format_constant(value());
    case Kind::kVar:
      return "z" + std::to_string(index());
    case Kind::kConj:
      return "conj(" + arg().to_string() + ")";
    case Kind::kNeg:
      return "(-" + arg().to_string() + ")";
    case Kind::kAdd:
      return "(" + lhs().to_string() + " + " + rhs().to_string() + ")";
    case Kind::kSub:
      return "(" + lhs().to_string() + " - " + rhs().to_string() + ")";
    case Kind::kMul:
      return "(" + lhs().to_string() + "*" + rhs().to_string() + ")";
    case Kind::kDiv:
      return "(" + lhs().to_string() + "/" + rhs().to_string() + ")";
    case Kind::kPow:
      return "pow(" + arg().to_string() + ", " + std::to_string(index()) + ")";
    case Kind::kExp:
      return "exp(" + arg().to_string() + ")";
    case Kind::kSin:
      return "sin(" + arg().to_string() + ")";
    case Kind::kCos:
      return "cos(" + arg().to_string() + ")";
  }
  return {};
}

namespace {

template <class T>
std::complex<T> eval_as(const Expr& e, std::span<const cplx> point) {
  using K = Expr::Kind;
  using C = std::complex<T>;
  switch (e.kind()) {
    case K::kConst:
      return C(e.value());
    case K::kVar:
      if (static_cast<std::size_t>(e.index()) > point.size()) {
        throw ValidationError("evaluation point has fewer coordinates than the expression arity");
      }
      return C(point[e.index() - 1]);
    case K::kConj:
      return std::conj(eval_as<T>(e.arg(), point));
    case K::kNeg:
      return -eval_as<T>(e.arg(), point);
    case K::kAdd:
      return eval_as<T>(e.lhs(), point) + eval_as<T>(e.rhs(), point);
    case K::kSub:
      return eval_as<T>(e.lhs(), point) - eval_as<T>(e.rhs(), point);
    case K::kMul:
      return eval_as<T>(e.lhs(), point) * eval_as<T>(e.rhs(), point);
    case K::kDiv: {
      const C den = eval_as<T>(e.rhs(), point);
      if (den == C(0.0)) throw NumericalError("division by zero");
      return eval_as<T>(e.lhs(), point) / den;
    }
    case K::kPow:
      return ipow(eval_as<T>(e.arg(), point), e.index());
    case K::kExp:
      return std::exp(eval_as<T>(e.arg(), point));
    case K::kSin:
      return std::sin(eval_as<T>(e.arg(), point));
    case K::kCos:
      return std::cos(eval_as<T>(e.arg(), point));
  }
  return {};
}

}  // namespace

cplx eval(const Expr& e, std::span<const cplx> point) { return eval_as<double>(e, point); }

std::complex<long double> eval_extended(const Expr& e, std::span<const cplx> point) {
  return eval_as<long double>(e, point);
}

namespace {

// bar = true: ∂/∂z̄_j, bar = false: ∂/∂z_j.
Expr wirtinger(const Expr& e, int j, bool bar) {
  using K = Expr::Kind;
  if (e.max_variable() < j) return Expr();
  switch (e.kind()) {
    case K::kConst:
      return Expr();
    case K::kVar:
      return (!bar && e.index() == j) ? Expr(1.0) : Expr();
    case K::kConj:
      return conj(wirtinger(e.arg(), j, !bar));
    case K::kNeg:
      return -wirtinger(e.arg(), j, bar);
    case K::kAdd:
      return wirtinger(e.lhs(), j, bar) + wirtinger(e.rhs(), j, bar);
    case K::kSub:
      return wirtinger(e.lhs(), j, bar) - wirtinger(e.rhs(), j, bar);
    case K::kMul:
      return wirtinger(e.lhs(), j, bar) * e.rhs() + e.lhs() * wirtinger(e.rhs(), j, bar);
    case K::kDiv: {
      const Expr da = wirtinger(e.lhs(), j, bar);
      const Expr db = wirtinger(e.rhs(), j, bar);
      if (db.is_zero()) return da / e.rhs();
      return (da * e.rhs() - e.lhs() * db) / pow(e.rhs(), 2);
    }
    case K::kPow: {
      const int n = e.index();
      return Expr(static_cast<double>(n)) * pow(e.arg(), n - 1) * wirtinger(e.arg(), j, bar);
    }
    case K::kExp:
      return e * wirtinger(e.arg(), j, bar);
    case K::kSin:
      return cos(e.arg()) * wirtinger(e.arg(), j, bar);
    case K::kCos:
      return -(sin(e.arg()) * wirtinger(e.arg(), j, bar));
  }
  return {};
}

}  // namespace

Expr d_bar(const Expr& e, int j) {
  if (j < 1) throw ValidationError("variable index must be >= 1");
  return wirtinger(e, j, true);
}

Expr d_z(const Expr& e, int j) {
  if (j < 1) throw ValidationError("variable index must be >= 1");
  return wirtinger(e, j, false);
}

Expr d_bar(const Expr& e, std::span<const int> indices) {
  Expr out = e;
  for (int j : indices) out = d_bar(out, j);
  return out;
}

CompiledExpr::CompiledExpr(const Expr& e) : max_variable_(e.max_variable()) {
  if (e.is_constant()) {
    constant_ = true;
    constant_value_ = e.value();
  }
  std::size_t depth = 0;
  // post-order emission with an explicit traversal
  auto emit = [&](auto&& self, const Expr& x) -> void {
    using K = Expr::Kind;
    switch (x.kind()) {
      case K::kConst:
        code_.push_back({K::kConst, 0, x.value()});
        max_depth_ = std::max(max_depth_, ++depth);
        return;
      case K::kVar:
        code_.push_back({K::kVar, x.index() - 1, {}});
        max_depth_ = std::max(max_depth_, ++depth);
        return;
      case K::kAdd:
      case K::kSub:
      case K::kMul:
      case K::kDiv:
        self(self, x.lhs());
        self(self, x.rhs());
        code_.push_back({x.kind(), 0, {}});
        --depth;
        return;
      default:
        self(self, x.arg());
        code_.push_back({x.kind(), x.index(), {}});
        return;
    }
  };
  emit(emit, e);
}

cplx CompiledExpr::operator()(std::span<const cplx> point) const {
  if (constant_) return constant_value_;
  if (static_cast<std::size_t>(max_variable_) > point.size()) {
    throw ValidationError("evaluation point has fewer coordinates than the expression arity");
  }
  thread_local std::vector<cplx> storage;
  if (storage.size() < max_depth_) storage.resize(max_depth_);
  cplx* stack = storage.data();
  std::size_t top = 0;
  using K = Expr::Kind;
  for (const Instr& in : code_) {
    switch (in.op) {
      case K::kConst:
        stack[top++] = in.value;
        break;
      case K::kVar:
        stack[top++] = point[in.index];
        break;
      case K::kConj:
        stack[top - 1] = std::conj(stack[top - 1]);
        break;
      case K::kNeg:
        stack[top - 1] = -stack[top - 1];
        break;
      case K::kAdd:
        --top;
        stack[top - 1] += stack[top];
        break;
      case K::kSub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case K::kMul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case K::kDiv:
        --top;
        if (stack[top] == cplx(0.0)) throw NumericalError("division by zero");
        stack[top - 1] /= stack[top];
        break;
      case K::kPow:
        stack[top - 1] = ipow(stack[top - 1], in.index);
        break;
      case K::kExp:
        stack[top - 1] = std::exp(stack[top - 1]);
        break;
      case K::kSin:
        stack[top - 1] = std::sin(stack[top - 1]);
        break;
      case K::kCos:
        stack[top - 1] = std::cos(stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

}  // namespace dbar
