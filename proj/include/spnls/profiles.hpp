#pragma once

#include <string>
#include <vector>

#include "spnls/grid.hpp"
#include "spnls/rescale.hpp"
#include "spnls/solver.hpp"

// Frames, the concentration functional Λ, iterative profile extraction and
// orthogonality diagnostics on sequences of fields on ℝ×T³.
namespace spnls::profiles {

enum class FrameKind { Scale1, Euclidean };

const char* to_string(FrameKind k);

struct FrameEntry {
    FrameKind kind = FrameKind::Scale1;
    double N = 1.0;
    double t = 0.0;
    Point x{};

    void validate() const;
};

// |ln(N1/N2)| + N1²|t1−t2| + N1·d(x1,x2): chordal distance on the long circle,
// periodic distance on T³.
double orthogonality_score(const FrameEntry& a, const FrameEntry& b, const GridSpec& spec);

struct LambdaResult {
    double value = 0.0;
    int N = 1;
    double t = 0.0;
    Point x{};
    LatticeShift shift{};
};

// n uniform samples of [−1, 1].
std::vector<double> lambda_times(int n = 64);
// Dyadic N from 1 to the top shell of the grid.
std::vector<int> lambda_scales(const GridSpec& spec);

// max over N, t and grid x of N^{-1}|e^{itΔ}P_N f(x)|, with golden-section refinement in t
// around the coarse maximum.
LambdaResult lambda_functional(const Field& f, const std::vector<double>& t_samples, const std::vector<int>& N_set,
                               int golden_iters = 24);
LambdaResult lambda_functional(const Field& f);

struct ProfileOptions {
    double delta = 0.05;
    int t_samples = 64;
    std::vector<int> N_set;  // empty: all dyadic shells on the grid
    int golden_iters = 24;
    int euclid_threshold = 8;
    double R = 4.0;
    bool refine_R = true;
    double R_growth = 0.01;
    EuclidSpec box{16.0, 32};
    double t_snap = 1.0;      // Euclidean frames with N²|t| ≤ t_snap use t = 0
    double cauchy_tol = 0.1;
    double nonzero_c = 0.1;   // profile norm ≥ c·δ
    int max_profiles = 16;

    void validate() const;
};

struct ExtractedProfile {
    FrameKind kind = FrameKind::Scale1;
    std::vector<FrameEntry> frames;  // one per sequence element
    Field scale1;                    // Scale-1 profile on the torus
    EuclidField euclid;              // Euclidean profile on the box
    double R = 0.0;
    double lambda = 0.0;   // Λ of the input sequence
    double norm = 0.0;     // H¹ (Scale-1) or Ḣ¹ (Euclidean)
    double cauchy = 0.0;   // weak-limit proxy diagnostic
    bool refused = false;
    std::vector<Field> mapped;  // ψ̃ along the frame, per element
    std::vector<std::string> flags;
};

// Profile along a given frame sequence; refused when Λ of the sequence is below δ.
ExtractedProfile extract_profile(const std::vector<Field>& seq, const std::vector<FrameEntry>& frames,
                                 const ProfileOptions& opt = {});

struct OrthogonalityReport {
    std::vector<double> l2_residual, hdot1_residual, l4_residual;  // per element
    double max_l2 = 0.0, max_hdot1 = 0.0, max_l4 = 0.0;
    std::vector<std::vector<double>> inner;  // max_k |⟨ψ̃_a, ψ̃_b⟩_{H¹}| / (‖ψ̃_a‖‖ψ̃_b‖)
    std::vector<std::vector<double>> score;  // min_k orthogonality score of the frames
    std::string csv() const;
};

struct ProfileDecomposition {
    double delta = 0.0;
    std::vector<Field> fields;
    std::vector<ExtractedProfile> profiles;
    std::vector<Field> remainder;
    std::vector<double> remainder_lambda;  // per element
    double lambda_remainder = 0.0;
    double count_constant = 0.0;  // profiles·δ²
    int iterations = 0;
    bool cap_hit = false;
    OrthogonalityReport orthogonality;
    std::vector<std::string> flags;
    std::string csv() const;
};

ProfileDecomposition profile_decompose(const std::vector<Field>& seq, const ProfileOptions& opt = {});

// Pythagorean residuals in L², Ḣ¹ and L⁴ plus pairwise inner products.
OrthogonalityReport orthogonality_report(const ProfileDecomposition& d);

double h1_inner(const Field& a, const Field& b);

struct NonlinearProfileRow {
    FrameEntry frame;
    std::vector<double> times;
    std::vector<double> discrepancy;
    double sup_discrepancy = 0.0;
};

struct NonlinearProfileReport {
    double eps = 0.0;
    int K = 0;                // box cutoff of the smoothed profile P_{≤K}φ
    double achieved = 0.0;    // ‖φ − P_{≤K}φ‖_{Ḣ¹}
    double R = 0.0, T0 = 0.0;
    std::vector<NonlinearProfileRow> rows;
    std::vector<std::string> flags;
    std::string csv() const;
};

// U_k(0) = Π_{t_k,x_k}T_{N_k}φ′ evolved on the torus against the matched rescaled
// box solution, over |t − t_k| ≤ T0·N_k^{−2}.
NonlinearProfileReport nonlinear_profile_experiment(const EuclidField& phi, const std::vector<FrameEntry>& frames,
                                                    double eps, double R, double T0,
                                                    const solver::SolveConfig& cfg,
                                                    const solver::EuclidOptions& opt = {});

// Smallest dyadic K with ‖φ − P_{≤K}φ‖_{Ḣ¹} ≤ eps (box Nyquist cap).
EuclidField smooth_profile(const EuclidField& phi, double eps, int* K = nullptr, double* achieved = nullptr);

}  // namespace spnls::profiles
