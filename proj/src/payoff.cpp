#include "dbarrier/payoff.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbarrier {

Payoff Payoff::constant(double c) {
    Payoff p;
    p.kind_ = PayoffKind::Constant;
    p.a_ = c;
    return p;
}

Payoff Payoff::call(double strike) {
    Payoff p;
    p.kind_ = PayoffKind::Call;
    p.a_ = strike;
    return p;
}

Payoff Payoff::put(double strike) {
    Payoff p;
    p.kind_ = PayoffKind::Put;
    p.a_ = strike;
    return p;
}

Payoff Payoff::exp_call(double strike) {
    if (!(strike > 0.0)) throw std::invalid_argument("exp_call: strike must be positive");
    Payoff p;
    p.kind_ = PayoffKind::ExpCall;
    p.a_ = strike;
    return p;
}

Payoff Payoff::exp_put(double strike) {
    if (!(strike > 0.0)) throw std::invalid_argument("exp_put: strike must be positive");
    Payoff p;
    p.kind_ = PayoffKind::ExpPut;
    p.a_ = strike;
    return p;
}

Payoff Payoff::sine(double amplitude, double omega, double phase) {
    Payoff p;
    p.kind_ = PayoffKind::Sine;
    p.a_ = amplitude;
    p.b_ = omega;
    p.c_ = phase;
    return p;
}

Payoff Payoff::tabulated(std::vector<double> xs, std::vector<double> vals) {
    Payoff p;
    p.kind_ = PayoffKind::Tabulated;
    p.table_ = CurveFn(std::move(xs), std::move(vals));
    return p;
}

double Payoff::value(double x) const {
    switch (kind_) {
        case PayoffKind::Constant: return a_;
        case PayoffKind::Call: return std::max(x - a_, 0.0);
        case PayoffKind::Put: return std::max(a_ - x, 0.0);
        case PayoffKind::ExpCall: return std::max(std::exp(x) - a_, 0.0);
        case PayoffKind::ExpPut: return std::max(a_ - std::exp(x), 0.0);
        case PayoffKind::Sine: return a_ * std::sin(b_ * x + c_);
        case PayoffKind::Tabulated: return table_->value(x);
    }
    return 0.0;
}

double Payoff::derivative(double x, int side) const {
    const bool right = side >= 0;
    switch (kind_) {
        case PayoffKind::Constant: return 0.0;
        case PayoffKind::Call: return (x > a_ || (x == a_ && right)) ? 1.0 : 0.0;
        case PayoffKind::Put: return (x < a_ || (x == a_ && !right)) ? -1.0 : 0.0;
        case PayoffKind::ExpCall: {
            const double k = std::log(a_);
            return (x > k || (x == k && right)) ? std::exp(x) : 0.0;
        }
        case PayoffKind::ExpPut: {
            const double k = std::log(a_);
            return (x < k || (x == k && !right)) ? -std::exp(x) : 0.0;
        }
        case PayoffKind::Sine: return a_ * b_ * std::cos(b_ * x + c_);
        case PayoffKind::Tabulated: return table_->derivative(x);
    }
    return 0.0;
}

std::vector<double> Payoff::kinks() const {
    switch (kind_) {
        case PayoffKind::Call:
        case PayoffKind::Put: return {a_};
        case PayoffKind::ExpCall:
        case PayoffKind::ExpPut: return {std::log(a_)};
        default: return {};
    }
}

std::string Payoff::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case PayoffKind::Constant: os << "constant(" << a_ << ")"; break;
        case PayoffKind::Call: os << "call(K=" << a_ << ")"; break;
        case PayoffKind::Put: os << "put(K=" << a_ << ")"; break;
        case PayoffKind::ExpCall: os << "exp_call(K=" << a_ << ")"; break;
        case PayoffKind::ExpPut: os << "exp_put(K=" << a_ << ")"; break;
        case PayoffKind::Sine: os << "sine(" << a_ << ", w=" << b_ << ", p=" << c_ << ")"; break;
        case PayoffKind::Tabulated: os << "tabulated"; break;
    }
    return os.str();
}

}  // namespace dbarrier
