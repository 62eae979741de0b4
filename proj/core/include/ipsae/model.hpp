#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ipsae/data.hpp"
#include "ipsae/linalg.hpp"
#include "ipsae/matrix.hpp"

namespace ipsae {

enum class SpaceMode : std::uint8_t {
    kEnriched = 0,  // fit on X′ = X ⊕ S
    kOriginal = 1,  // fit on X only (baseline)
};

/// The (A, B, C) triple of the Sylvester system AW + WB = C with
/// A = SSᵀ, B = λX′X′ᵀ, C = (1+λ)SX′ᵀ.
struct SylvesterSystem {
    Matrix A;
    Matrix B;
    Matrix C;
    double lambda = 1.0;
};

/// Fitted linear transformation between the (enriched) visual space and the
/// semantic space, plus fit diagnostics.
struct IpSaeModel {
    Matrix W;  // k × m
    double lambda = 1.0;
    std::size_t visual_dim = 0;    // d
    std::size_t semantic_dim = 0;  // k
    SpaceMode space_mode = SpaceMode::kEnriched;
    std::size_t nullified_modes = 0;
    double residual = 0.0;

    std::size_t input_dim() const {
        return space_mode == SpaceMode::kEnriched ? visual_dim + semantic_dim : visual_dim;
    }
};

struct HubnessBound {
    double alpha = 0.0;  // largest singular value of S
    double bound = 0.0;  // α² / (α² + λ)
    double lhs = 0.0;    // ‖Sᵀ(SSᵀ+λI)⁻¹S‖₂
};

SylvesterSystem build_system(const Matrix& xp, const Matrix& s, double lambda);

IpSaeModel fit(const ZslDataset& dataset, const std::vector<std::size_t>& train_indices,
               double lambda, SpaceMode space_mode);

/// Encoder: W·Xp, semantic coordinates of (enriched) visual columns.
Matrix encode(const IpSaeModel& model, const Matrix& xp);

/// Decoder: Wᵀ·S_cols, one prototype per attribute column.
Matrix decode(const IpSaeModel& model, const Matrix& s_cols);

/// The spectral contraction α²/(α²+λ) of the ridge projection, together with
/// the directly computed operator norm it should equal.
HubnessBound hubness_bound(const Matrix& s, double lambda);

void save_model(const IpSaeModel& model, const std::filesystem::path& file);
IpSaeModel load_model(const std::filesystem::path& file);

}  // namespace ipsae
