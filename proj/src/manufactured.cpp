#include "plg/manufactured.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace plg {

namespace {

constexpr double pi = std::numbers::pi;

// Derivatives of order 0..3 of sin^2(pi x).
std::array<double, 4> bump_derivatives(double x)
{
    const double s = std::sin(pi * x);
    const double s2 = std::sin(2.0 * pi * x);
    const double c2 = std::cos(2.0 * pi * x);
    return {s * s, pi * s2, 2.0 * pi * pi * c2, -4.0 * pi * pi * pi * s2};
}

// Orders never exceed 3 here.
constexpr int binomial(int n, int k)
{
    constexpr int table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return table[n][k];
}

constexpr std::array<double, 7> pi_powers{1.0, pi, pi * pi, pi * pi * pi, pi * pi * pi * pi,
                                          pi * pi * pi * pi * pi, pi * pi * pi * pi * pi * pi};

/// amplitude * sin^2(pi x1) sin^2(pi x2) sin(pi (a x1 + b x2 + t)).
struct WaveTerm {
    double amplitude;
    double a;
    double b;
};

/// Trigonometric data shared by every derivative of one term at one point.
class WaveJet {
public:
    WaveJet(const WaveTerm& term, const std::array<double, 4>& bx, const std::array<double, 4>& by, Vec2 x,
            double t)
        : amplitude_(term.amplitude), bx_(bx), by_(by)
    {
        const double theta = pi * (term.a * x.x + term.b * x.y + t);
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        shifted_ = {s, c, -s, -c};
        for (int k = 1; k < 4; ++k) {
            pow_a_[k] = pow_a_[k - 1] * term.a;
            pow_b_[k] = pow_b_[k - 1] * term.b;
        }
    }

    /// d^i/dx1^i d^j/dx2^j d^c/dt^c by Leibniz.
    double operator()(int i, int j, int c = 0) const
    {
        double sum = 0.0;
        for (int ii = 0; ii <= i; ++ii) {
            const double sx = binomial(i, ii) * bx_[ii];
            for (int jj = 0; jj <= j; ++jj) {
                const int di = i - ii;
                const int dj = j - jj;
                const int order = di + dj + c;
                const double phase = pow_a_[di] * pow_b_[dj] * pi_powers[order];
                if (phase == 0.0) continue;
                sum += sx * binomial(j, jj) * by_[jj] * phase * shifted_[order % 4];
            }
        }
        return amplitude_ * sum;
    }

private:
    double amplitude_;
    const std::array<double, 4>& bx_;
    const std::array<double, 4>& by_;
    std::array<double, 4> shifted_{};
    std::array<double, 4> pow_a_{1.0, 0.0, 0.0, 0.0};
    std::array<double, 4> pow_b_{1.0, 0.0, 0.0, 0.0};
};

const WaveTerm psi_term{std::sqrt(3.0) / (2.0 * pi), 1.0, 1.0};
const WaveTerm c11_term{0.5, 1.0, 0.0};
const WaveTerm c12_term{0.5, 1.0, 1.0};
const WaveTerm c22_term{0.5, 0.0, 1.0};

/// All four wave terms at one (x, t).
struct Jets {
    std::array<double, 4> bx;
    std::array<double, 4> by;
    WaveJet psi, c11, c12, c22;

    Jets(Vec2 x, double t)
        : bx(bump_derivatives(x.x)), by(bump_derivatives(x.y)), psi(psi_term, bx, by, x, t),
          c11(c11_term, bx, by, x, t), c12(c12_term, bx, by, x, t), c22(c22_term, bx, by, x, t)
    {
    }
    Jets(const Jets&) = delete;
    Jets& operator=(const Jets&) = delete;

    Sym2 tensor_derivative(int i, int j, int c = 0) const { return {c11(i, j, c), c12(i, j, c), c22(i, j, c)}; }

    Vec2 velocity() const { return {psi(0, 1), -psi(1, 0)}; }
    Mat2 velocity_gradient() const
    {
        const double p12 = psi(1, 1);
        Mat2 g;
        g(0, 0) = p12;
        g(0, 1) = psi(0, 2);
        g(1, 0) = -psi(2, 0);
        g(1, 1) = -p12;
        return g;
    }
    Vec2 velocity_dt() const { return {psi(0, 1, 1), -psi(1, 0, 1)}; }
    Vec2 velocity_laplacian() const { return {psi(2, 1) + psi(0, 3), -(psi(3, 0) + psi(1, 2))}; }
    Sym2 tensor() const
    {
        Sym2 c = tensor_derivative(0, 0);
        c.c11 += 1.0;
        c.c22 += 1.0;
        return c;
    }
    std::array<Sym2, 2> tensor_gradient() const { return {tensor_derivative(1, 0), tensor_derivative(0, 1)}; }
    Sym2 tensor_dt() const { return tensor_derivative(0, 0, 1); }
    Sym2 tensor_laplacian() const { return tensor_derivative(2, 0) + tensor_derivative(0, 2); }
};

}  // namespace

double ManufacturedSolution::stream(Vec2 x, double t) const { return Jets(x, t).psi(0, 0); }

Vec2 ManufacturedSolution::velocity(Vec2 x, double t) const { return Jets(x, t).velocity(); }

Mat2 ManufacturedSolution::velocity_gradient(Vec2 x, double t) const { return Jets(x, t).velocity_gradient(); }

Vec2 ManufacturedSolution::velocity_dt(Vec2 x, double t) const { return Jets(x, t).velocity_dt(); }

Vec2 ManufacturedSolution::velocity_laplacian(Vec2 x, double t) const { return Jets(x, t).velocity_laplacian(); }

double ManufacturedSolution::pressure(Vec2 x, double t) const
{
    return std::sin(pi * (x.x + 2.0 * x.y + t));
}

Vec2 ManufacturedSolution::pressure_gradient(Vec2 x, double t) const
{
    const double c = pi * std::cos(pi * (x.x + 2.0 * x.y + t));
    return {c, 2.0 * c};
}

Sym2 ManufacturedSolution::tensor(Vec2 x, double t) const { return Jets(x, t).tensor(); }

std::array<Sym2, 2> ManufacturedSolution::tensor_gradient(Vec2 x, double t) const
{
    return Jets(x, t).tensor_gradient();
}

Sym2 ManufacturedSolution::tensor_dt(Vec2 x, double t) const { return Jets(x, t).tensor_dt(); }

Sym2 ManufacturedSolution::tensor_laplacian(Vec2 x, double t) const { return Jets(x, t).tensor_laplacian(); }

Vec2 ManufacturedSolution::forcing_f(Vec2 x, double t) const
{
    const Jets jets(x, t);
    const Vec2 w = jets.velocity();
    const Mat2 gu = jets.velocity_gradient();
    const Vec2 ut = jets.velocity_dt();
    const Vec2 lap = jets.velocity_laplacian();
    const Vec2 gp = pressure_gradient(x, t);
    const Sym2 c = jets.tensor();
    const auto gc = jets.tensor_gradient();
    const double tr = c.trace();
    const Vec2 gtr{gc[0].trace(), gc[1].trace()};

    Vec2 f;
    for (int i = 0; i < 2; ++i) {
        const double advect = w.x * gu(i, 0) + w.y * gu(i, 1);
        double div_stress = 0.0;
        for (int j = 0; j < 2; ++j) div_stress += gtr[j] * c(i, j) + tr * gc[j](i, j);
        // div u = 0, so div(2 nu D(u)) = nu Lap u.
        f[i] = ut[i] + advect - nu_ * lap[i] + gp[i] - div_stress;
    }
    return f;
}

Sym2 ManufacturedSolution::forcing_F(Vec2 x, double t) const
{
    const Jets jets(x, t);
    const Vec2 w = jets.velocity();
    const Mat2 gu = jets.velocity_gradient();
    const Sym2 c = jets.tensor();
    const auto gc = jets.tensor_gradient();
    const Sym2 ct = jets.tensor_dt();
    const Sym2 lap = jets.tensor_laplacian();
    const double tr = c.trace();

    // M = (grad u) C; the stretching term is M + M^T.
    auto m = [&](int i, int j) { return gu(i, 0) * c(0, j) + gu(i, 1) * c(1, j); };
    const Sym2 stretch{2.0 * m(0, 0), m(0, 1) + m(1, 0), 2.0 * m(1, 1)};
    const Sym2 advect = w.x * gc[0] + w.y * gc[1];

    Sym2 f = ct + advect - eps_ * lap - stretch + (tr * tr) * c;
    f.c11 -= tr;
    f.c22 -= tr;
    return f;
}

}  // namespace plg
