#include <catch2/catch.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <emdof/channel.hpp>
#include <emdof/spectra.hpp>

#include "oracles.hpp"

using namespace emdof;

namespace {

ArrayGeometry single_point(double x, double y, double z, const char* label) {
    return ArrayGeometry{{{x, y, z}}, label, {}};
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXcd& h) {
    return hermitian_eigenvalues(correlation(h)).eigenvalues;
}

} // namespace

TEST_CASE("polarization mask parsing and validation", "[channel]") {
    CHECK(axes_string(parse_axes("xz")) == "xz");
    CHECK_THROWS_AS(parse_axes(""), invalid_argument_error);
    CHECK_THROWS_AS(parse_axes("xx"), invalid_argument_error);
    CHECK_THROWS_AS(parse_axes("zx"), invalid_argument_error);
    CHECK_THROWS_AS(parse_axes("w"), invalid_argument_error);

    PolarizationMode scalar_two_axes{{Axis::X, Axis::Y}, {Axis::X}, GreensKind::Scalar};
    CHECK_THROWS_AS(validate(scalar_two_axes), invalid_argument_error);
    CHECK_NOTHROW(validate(PolarizationMode::scalar()));
    CHECK_NOTHROW(validate(PolarizationMode::dyadic_full()));
}

TEST_CASE("single-pair scalar channel reduces to the scalar kernel", "[channel]") {
    const ChannelMatrix h = assemble_channel(single_point(0, 0, 0, "src"), single_point(0, 0, 1, "rx"),
                                             PolarizationMode::scalar());
    REQUIRE(h.entries.rows() == 1);
    REQUIRE(h.entries.cols() == 1);
    CHECK(h.entries(0, 0) == scalar_green({0, 0, 1}, {0, 0, 0}));
}

TEST_CASE("single-pair full-polarization channel equals the dyadic tensor", "[channel]") {
    const ChannelMatrix h = assemble_channel(single_point(0, 0, 0, "src"), single_point(0, 0, 1, "rx"),
                                             PolarizationMode::dyadic_full());
    REQUIRE(h.entries.rows() == 3);
    REQUIRE(h.entries.cols() == 3);
    const DyadicTensor t = dyadic_green({0, 0, 1}, {0, 0, 0});
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
            CHECK(h.entries(p, q) == t(p, q));
            if (p != q) CHECK(std::abs(h.entries(p, q)) == 0.0);
        }
}

TEST_CASE("capacity-geometry channel entries match per-entry re-evaluation", "[channel][oracle]") {
    auto [src, rx] = make_paired_planes(10.0, 20, 7.0);
    const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::scalar());
    REQUIRE(h.entries.rows() == 400);
    REQUIRE(h.entries.cols() == 400);

    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> idx(0, 399);
    for (int rep = 0; rep < 10; ++rep) {
        const int m = idx(rng), n = idx(rng);
        // independent evaluation of exp(-j*k0*R) / (4*pi*R)
        const double r = distance(rx.elements[static_cast<std::size_t>(m)],
                                  src.elements[static_cast<std::size_t>(n)]);
        const Complex expected = std::exp(Complex(0, -2.0 * pi * r)) / (4.0 * pi * r);
        CHECK(std::abs(h.entries(m, n) - expected) <= 1e-15);
    }
}

TEST_CASE("apply_channel is the superposition sum", "[channel][oracle]") {
    SECTION("1x1 identity case") {
        const ChannelMatrix h = assemble_channel(single_point(0, 0, 0, "s"), single_point(0, 0, 1, "r"),
                                                 PolarizationMode::scalar());
        Eigen::VectorXcd t(1);
        t << Complex(1, 0);
        CHECK(apply_channel(h, t)(0) == h.entries(0, 0));
    }
    SECTION("zero amplitudes give zero fields") {
        auto [src, rx] = make_paired_planes(2.0, 2, 3.0);
        const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::scalar());
        const Eigen::VectorXcd f = apply_channel(h, Eigen::VectorXcd::Zero(4));
        CHECK(f.norm() == 0.0);
    }
    SECTION("random channel against the naive double loop") {
        std::mt19937 rng(77);
        ChannelMatrix h;
        h.mode = PolarizationMode::scalar();
        h.entries = testing::random_complex_matrix(rng, 9, 4);
        const Eigen::VectorXcd t = testing::random_complex_matrix(rng, 4, 1);
        const Eigen::VectorXcd fast = apply_channel(h, t);
        const Eigen::VectorXcd slow = testing::naive_matvec(h.entries, t);
        CHECK((fast - slow).norm() <= 1e-13 * slow.norm());
    }
    SECTION("dimension mismatch") {
        auto [src, rx] = make_paired_planes(2.0, 2, 3.0);
        const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::scalar());
        CHECK_THROWS_AS(apply_channel(h, Eigen::VectorXcd::Zero(3)), dimension_error);
    }
}

TEST_CASE("correlation picks the smaller side and symmetrizes", "[channel]") {
    std::mt19937 rng(31);
    SECTION("wide matrix uses H*Hdagger") {
        const Eigen::MatrixXcd h = testing::random_complex_matrix(rng, 3, 5);
        const CorrelationMatrix r = correlation(h);
        CHECK(r.side_used == CorrelationSide::HHdagger);
        CHECK(r.entries.rows() == 3);
    }
    SECTION("tall matrix uses Hdagger*H") {
        const Eigen::MatrixXcd h = testing::random_complex_matrix(rng, 5, 3);
        const CorrelationMatrix r = correlation(h);
        CHECK(r.side_used == CorrelationSide::HdaggerH);
        CHECK(r.entries.rows() == 3);
    }
    SECTION("square matrix ties to Hdagger*H") {
        const Eigen::MatrixXcd h = testing::random_complex_matrix(rng, 4, 4);
        CHECK(correlation(h).side_used == CorrelationSide::HdaggerH);
    }
    SECTION("result is exactly Hermitian and the defect was tiny") {
        const Eigen::MatrixXcd h = testing::random_complex_matrix(rng, 6, 4);
        const CorrelationMatrix r = correlation(h);
        CHECK((r.entries - r.entries.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(r.symmetrization_defect < 1e-12);
    }
}

TEST_CASE("correlation special cases", "[channel]") {
    SECTION("single boresight link at D = 1") {
        const ChannelMatrix h = assemble_channel(single_point(0, 0, 0, "s"), single_point(0, 0, 1, "r"),
                                                 PolarizationMode::scalar());
        const CorrelationMatrix r = correlation(h);
        CHECK(r.entries(0, 0).real() == Approx(1.0 / (16.0 * pi * pi)).epsilon(1e-13));
        CHECK(std::abs(r.entries(0, 0).imag()) < 1e-20);
    }
    SECTION("orthonormal columns give the identity") {
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 2);
        h(0, 0) = Complex(1, 0);
        h(1, 1) = Complex(0, 1);
        const CorrelationMatrix r = correlation(h);
        CHECK((r.entries - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    }
    SECTION("trace identity against entrywise accumulation") {
        auto [src, rx] = make_paired_planes(10.0, 20, 7.0);
        const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::scalar());
        const CorrelationMatrix r = correlation(h);
        double accumulated = 0.0;
        for (Eigen::Index i = 0; i < h.entries.rows(); ++i)
            for (Eigen::Index j = 0; j < h.entries.cols(); ++j)
                accumulated += std::norm(h.entries(i, j));
        CHECK(r.entries.trace().real() == Approx(accumulated).epsilon(1e-12));
    }
}

TEST_CASE("block layout is polarization-major", "[channel]") {
    auto [src, rx] = make_paired_planes(1.5, 2, 2.0);
    const ChannelMatrix full = assemble_channel(src, rx, PolarizationMode::dyadic_full());
    REQUIRE(full.entries.rows() == 12);
    REQUIRE(full.entries.cols() == 12);

    // block (p, q) must equal an independently assembled matrix of the
    // (p, q) dyadic component
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            for (std::size_t m = 0; m < 4; ++m)
                for (std::size_t n = 0; n < 4; ++n) {
                    const Complex direct = dyadic_green(rx.elements[m], src.elements[n])(p, q);
                    const Complex block = full.entries(static_cast<Eigen::Index>(p * 4 + m),
                                                       static_cast<Eigen::Index>(q * 4 + n));
                    CHECK(std::abs(block - direct) <= 1e-14 * std::max(1.0, std::abs(direct)));
                }
}

TEST_CASE("transmit- and receive-side correlation share nonzero eigenvalues", "[channel][property]") {
    std::mt19937 rng(2020);
    const Eigen::MatrixXcd h = testing::random_complex_matrix(rng, 20, 12);
    const Spectrum via_rows = hermitian_eigenvalues(Eigen::MatrixXcd(h * h.adjoint()));
    const Spectrum via_cols = hermitian_eigenvalues(Eigen::MatrixXcd(h.adjoint() * h));
    // the wide product has extra zero eigenvalues; compare the leading 12
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(via_rows.eigenvalues[i] == Approx(via_cols.eigenvalues[i]).epsilon(1e-9));
    for (std::size_t i = 12; i < 20; ++i)
        CHECK(via_rows.eigenvalues[i] <= 1e-9 * via_rows.eigenvalues[0]);
}

TEST_CASE("conjugating the channel leaves the spectrum unchanged", "[channel][property]") {
    auto [src, rx] = make_paired_planes(3.0, 3, 2.0);
    const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::dyadic_full());
    const auto direct = sorted_eigenvalues(h.entries);
    const auto conjugated = sorted_eigenvalues(h.entries.conjugate());
    REQUIRE(direct.size() == conjugated.size());
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(conjugated[i] == Approx(direct[i]).epsilon(1e-12).margin(1e-15 * direct[0]));
}

TEST_CASE("transverse masking equals deleting z-source columns", "[channel]") {
    auto [src, rx] = make_paired_planes(2.0, 3, 1.0);
    const ChannelMatrix masked = assemble_channel(src, rx, PolarizationMode::dyadic("xy", "xyz"));
    const ChannelMatrix full = assemble_channel(src, rx, PolarizationMode::dyadic_full());
    const std::size_t n_src = src.size();
    REQUIRE(masked.entries.cols() == static_cast<Eigen::Index>(2 * n_src));
    REQUIRE(masked.entries.rows() == full.entries.rows());
    // x and y source blocks are bitwise identical; the z block is gone
    CHECK(masked.entries == full.entries.leftCols(static_cast<Eigen::Index>(2 * n_src)));
}

TEST_CASE("assembly rejects singular cross pairs and bad modes", "[channel]") {
    ArrayGeometry a{{{0, 0, 0}, {1, 0, 0}}, "a", {}};
    ArrayGeometry b{{{0, 0, 0}}, "b", {}};
    CHECK_THROWS_AS(assemble_channel(a, b, PolarizationMode::scalar()), singularity_error);

    PolarizationMode empty_mask;
    empty_mask.kind = GreensKind::DyadicFull;
    auto [src, rx] = make_paired_planes(1.0, 2, 1.0);
    CHECK_THROWS_AS(assemble_channel(src, rx, empty_mask), invalid_argument_error);
}

TEST_CASE("channel matrix container round trip", "[channel][io]") {
    namespace fs = std::filesystem;
    auto [src, rx] = make_paired_planes(1.0, 2, 2.0);
    const ChannelMatrix h = assemble_channel(src, rx, PolarizationMode::dyadic("xy", "xyz"));

    const fs::path path = fs::temp_directory_path() / "emdof_test_matrix.bin";
    write_channel_matrix(h, path);
    const ChannelMatrix back = read_channel_matrix(path);
    fs::remove(path);

    REQUIRE(back.entries.rows() == h.entries.rows());
    REQUIRE(back.entries.cols() == h.entries.cols());
    CHECK(back.entries == h.entries); // raw IEEE-754 doubles, bitwise
    CHECK(back.mode == h.mode);
    CHECK(back.source_count == h.source_count);
    CHECK(back.receiver_count == h.receiver_count);
}
