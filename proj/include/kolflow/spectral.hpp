#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kolflow/numerics.hpp"

namespace kolflow {

/// Uniform periodic grid on [0,2pi)^2. n is a power of two >= 8. The dealias
/// fraction is stored as an exact rational num/den in (0,1]; a mode survives
/// truncation iff max(|kx|,|ky|) <= (num/den)*(n/2), evaluated in integers.
struct GridSpec {
    int n = 0;
    int dealias_num = 2;
    int dealias_den = 3;

    GridSpec() = default;
    GridSpec(int n_, int num = 2, int den = 3);

    int size() const { return n * n; }
    int log2n() const;

    /// Integer wavenumber of storage index m (Nyquist maps to -n/2).
    int wavenumber(int m) const { return m < n / 2 ? m : m - n; }
    /// Wavenumber with the Nyquist row treated as zero; all spectral
    /// multiplier operators use this so they stay skew-symmetric.
    int wavenumber_or_zero(int m) const { return m == n / 2 ? 0 : wavenumber(m); }
    int storage_index(int kx, int ky) const {
        return ((kx + n) % n) * n + ((ky + n) % n);
    }
    bool mode_kept(int kx, int ky) const {
        int ax = kx < 0 ? -kx : kx;
        int ay = ky < 0 ? -ky : ky;
        int m = ax > ay ? ax : ay;
        return 2L * dealias_den * m <= 1L * dealias_num * n;
    }

    bool operator==(const GridSpec&) const = default;
};

/// Complex Fourier coefficients, full n x n storage, row-major in (mx, my)
/// where mx indexes the x wavenumber and my the y wavenumber.
struct SpectralField {
    GridSpec grid;
    PrecisionConfig prec;
    std::vector<BigComplex> c;

    static SpectralField zeros(const GridSpec& g, const PrecisionConfig& p);

    BigComplex& at(int mx, int my) { return c[static_cast<size_t>(mx) * grid.n + my]; }
    const BigComplex& at(int mx, int my) const { return c[static_cast<size_t>(mx) * grid.n + my]; }
    /// Wavenumber addressing, kx/ky in [-n/2, n/2).
    BigComplex& mode(int kx, int ky) { return c[grid.storage_index(kx, ky)]; }
    const BigComplex& mode(int kx, int ky) const { return c[grid.storage_index(kx, ky)]; }

    bool is_finite() const;
};

/// Real samples f(x_i, y_j), x_i = 2pi i/n, row-major in (i, j).
struct PhysicalField {
    GridSpec grid;
    PrecisionConfig prec;
    std::vector<BigReal> v;

    static PhysicalField zeros(const GridSpec& g, const PrecisionConfig& p);

    BigReal& at(int i, int j) { return v[static_cast<size_t>(i) * grid.n + j]; }
    const BigReal& at(int i, int j) const { return v[static_cast<size_t>(i) * grid.n + j]; }

    bool is_finite() const;
};

/// Forward transform, normalization 1/n^2 on the forward side (the n^2 scaling
/// is an exact exponent shift). coeff(k) = (1/n^2) sum f(x) e^{-i k.x}.
SpectralField fft_forward(const PhysicalField& f);

/// Inverse transform. Verifies Hermitian symmetry and the reality of the
/// result to the noise floor (numeric_error otherwise).
PhysicalField fft_inverse(const SpectralField& s);

/// Direct O(n^4) summation with the same conventions; independent oracle for
/// the fast transform. Guarded to n <= 64.
SpectralField dft_reference(const PhysicalField& f);

/// Mixed spectral derivative: multiply by (i kx)^ax (i ky)^ay. Nyquist rows
/// are zeroed whenever the corresponding axis order is nonzero.
SpectralField derivative(const SpectralField& s, int ax, int ay);

/// Multiplier -|k|^2 applied directly (Nyquist treated as zero wavenumber).
SpectralField laplacian(const SpectralField& s);

/// Solve lap(psi) = w for zero-mean w: divide by -|k|^2, k=0 mode set to
/// exactly zero. Throws numeric_error if |c(0,0)| is above the noise floor.
SpectralField inverse_laplacian(const SpectralField& s);

/// Same, overwriting a field of matching shape (no allocation).
void inverse_laplacian_into(SpectralField& out, const SpectralField& s);

/// J(a,b) = dx(a) dy(b) - dx(b) dy(a), evaluated pseudo-spectrally on the
/// grid, transformed back, dealias-truncated.
SpectralField jacobian(const SpectralField& a, const SpectralField& b);

/// Zero every mode outside the dealias cutoff; exact zeros, idempotent.
SpectralField dealias_truncate(const SpectralField& s);

BigReal l2_norm(const SpectralField& s);
/// Largest component magnitude max(|re|,|im|) over all modes (scale estimate).
BigReal max_component(const SpectralField& s);
BigReal max_abs(const PhysicalField& f);
/// Largest |c(-k) - conj(c(k))| component over all modes.
BigReal hermitian_residual(const SpectralField& s);
/// ||a - b||_2 computed at the higher of the two precisions.
BigReal l2_diff(const SpectralField& a, const SpectralField& b);

/// Snapshot file: header (n, digits, t) then one line per mode,
/// "kx ky re im", kx-major lexicographic over [-n/2, n/2)^2.
void save_spectral_snapshot(std::ostream& os, const SpectralField& s, int digits,
                            std::string_view t_label);

struct LoadedSnapshot {
    int n = 0;
    int digits = 0;
    std::string t_label;
    SpectralField field;
};

/// Parse a snapshot; coefficients are parsed at `prec`. If grid.n != 0 the
/// stored n must match (config_error otherwise).
LoadedSnapshot load_spectral_snapshot(std::istream& is, const GridSpec& grid,
                                      const PrecisionConfig& prec);
/// Parse at a precision inferred from the stored digit count.
LoadedSnapshot load_spectral_snapshot(std::istream& is);

namespace detail {

/// In-place 2D transform over the raw buffer. dir=-1 forward (applies the
/// exact 1/n^2 scaling), dir=+1 inverse (no scaling).
void fft2d(std::vector<BigComplex>& buf, const GridSpec& g, const PrecisionConfig& p, int dir);

std::vector<BigComplex> make_buffer(const GridSpec& g, const PrecisionConfig& p);

/// buf := dx(f) + i dy(f); one inverse transform then yields both gradient
/// components of the real field f (two Hermitian spectra packed per pass).
void fill_gradient_combined(std::vector<BigComplex>& buf, const SpectralField& f);

/// buf := u + i v for the streamfunction psi: u = dy(psi), v = -dx(psi).
void fill_velocity_combined(std::vector<BigComplex>& buf, const SpectralField& psi);

/// Inverse-transform a packed buffer and split into (Re, Im) physical fields.
std::pair<PhysicalField, PhysicalField> ifft_split(std::vector<BigComplex>&& buf,
                                                   const GridSpec& g, const PrecisionConfig& p);

/// Same, writing into caller-owned fields; buf is consumed as scratch and
/// stays allocated for reuse.
void ifft_split_into(std::vector<BigComplex>& buf, const GridSpec& g, const PrecisionConfig& p,
                     PhysicalField& a, PhysicalField& b);

/// Forward transform of a real field, no checks, no dealiasing.
SpectralField forward_real(const PhysicalField& f);

/// Same, overwriting a field of matching shape (no allocation).
void forward_real_into(SpectralField& out, const PhysicalField& f);

void dealias_inplace(SpectralField& s);

}  // namespace detail

}  // namespace kolflow
