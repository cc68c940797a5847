#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "igmtf/rng.hpp"
#include "igmtf/sampler.hpp"

using namespace igmtf;

namespace {

EmbeddingBank bank_from_means(const Matrix& means, Index n = 2) {
    EmbeddingBank bank;
    const Index l = means.cols();
    for (Index b = 0; b < means.rows(); ++b) {
        bank.timestamps.push_back(10 + b);  // arbitrary but distinct, ascending
        Matrix emb(n, l);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < l; ++j) emb(i, j) = means(b, j) + 0.01 * static_cast<double>(i);
        bank.embeddings.push_back(std::move(emb));
    }
    bank.means = means;
    return bank;
}

double scalar_cosine(std::span<const double> a, std::span<const double> b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// Full sort of every candidate, descending cosine, ties by timestamp.
std::vector<Index> brute_force_top_k(const EmbeddingBank& bank, const Matrix& query, Index k) {
    std::vector<Index> pos(static_cast<std::size_t>(bank.size()));
    for (Index i = 0; i < bank.size(); ++i) pos[static_cast<std::size_t>(i)] = i;
    std::sort(pos.begin(), pos.end(), [&](Index a, Index b) {
        const double ca = scalar_cosine(bank.means.row(a), query.row(0));
        const double cb = scalar_cosine(bank.means.row(b), query.row(0));
        if (ca != cb) return ca > cb;
        return bank.timestamps[static_cast<std::size_t>(a)] <
               bank.timestamps[static_cast<std::size_t>(b)];
    });
    pos.resize(static_cast<std::size_t>(k));
    std::vector<Index> stamps;
    for (Index p : pos) stamps.push_back(bank.timestamps[static_cast<std::size_t>(p)]);
    return stamps;
}

}  // namespace

TEST_CASE("batch_mean") {
    CHECK(ops::bitwise_equal(batch_mean(Matrix::from_rows({{2, 0}, {0, 2}})),
                             Matrix::from_rows({{1, 1}})));
    const Matrix single = Matrix::from_rows({{3, -1, 2}});
    CHECK(ops::bitwise_equal(batch_mean(single), single));

    auto rng = make_rng(51, 0);
    const Matrix m = testfix::random_matrix(5, 3, rng);
    const Matrix got = batch_mean(m);
    for (Index j = 0; j < 3; ++j) {
        double s = 0;
        for (Index i = 0; i < 5; ++i) s += m(i, j);
        CHECK(std::abs(got(0, j) - s / 5.0) <= 1e-12);
    }
}

TEST_CASE("select_top_k picks the most similar timestamp") {
    const double inv = 1.0 / std::sqrt(2.0);
    const EmbeddingBank bank =
        bank_from_means(Matrix::from_rows({{1, 0}, {0, 1}, {inv, inv}}));
    const SampleSelection sel = select_top_k(bank, Matrix::from_rows({{1, 0}}), 1);
    REQUIRE(sel.timestamps.size() == 1);
    CHECK(sel.timestamps[0] == bank.timestamps[0]);
    CHECK(sel.refs.size() == 2);  // m = n·k with n = 2
}

TEST_CASE("k equal to the bank size selects everything") {
    auto rng = make_rng(52, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(6, 3, rng));
    const SampleSelection sel = select_top_k(bank, testfix::random_matrix(1, 3, rng), 6);
    std::vector<Index> got = sel.timestamps;
    std::sort(got.begin(), got.end());
    CHECK(got == bank.timestamps);
}

TEST_CASE("top-k agrees with the full-sort oracle on random banks") {
    auto rng = make_rng(53, 0);
    for (int trial = 0; trial < 100; ++trial) {
        const Index bank_size = 5 + static_cast<Index>(trial % 16);
        const Index k = 1 + static_cast<Index>(trial) % bank_size;
        const EmbeddingBank bank = bank_from_means(testfix::random_matrix(bank_size, 4, rng));
        const Matrix query = testfix::random_matrix(1, 4, rng);
        const SampleSelection sel = select_top_k(bank, query, k);
        CHECK(sel.timestamps == brute_force_top_k(bank, query, k));
    }
}

TEST_CASE("selection cosines are non-increasing and scale-invariant") {
    auto rng = make_rng(54, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(20, 4, rng));
    const Matrix query = testfix::random_matrix(1, 4, rng);
    const SampleSelection sel = select_top_k(bank, query, 7);

    double prev = 2.0;
    for (const Index t : sel.timestamps) {
        const Index pos = t - bank.timestamps[0];
        const double c = scalar_cosine(bank.means.row(pos), query.row(0));
        CHECK(c <= prev + 1e-15);
        prev = c;
    }

    const SampleSelection scaled = select_top_k(bank, ops::scale(query, 37.5), 7);
    CHECK(scaled.timestamps == sel.timestamps);
}

TEST_CASE("m = n*k and every ref stays in the bank") {
    auto rng = make_rng(55, 0);
    const Index n = 3;
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(12, 4, rng), n);
    const SampleSelection sel = select_top_k(bank, testfix::random_matrix(1, 4, rng), 5);
    CHECK(static_cast<Index>(sel.refs.size()) == n * 5);
    CHECK(sel.embeddings.rows() == n * 5);
    for (const InstanceRef& ref : sel.refs) {
        CHECK(std::find(bank.timestamps.begin(), bank.timestamps.end(), ref.timestamp) !=
              bank.timestamps.end());
        CHECK(ref.variable >= 0);
        CHECK(ref.variable < n);
    }
}

TEST_CASE("exclusion flag removes the batch's own timestamp") {
    auto rng = make_rng(56, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(5, 3, rng));
    const Matrix query = bank.means.row(2).size() ? [&] {
        Matrix q(1, 3);
        for (Index j = 0; j < 3; ++j) q(0, j) = bank.means(2, j);
        return q;
    }() : Matrix();
    const SampleSelection incl = select_top_k(bank, query, 1);
    CHECK(incl.timestamps[0] == bank.timestamps[2]);
    const SampleSelection excl = select_top_k(bank, query, 1, bank.timestamps[2]);
    CHECK(excl.timestamps[0] != bank.timestamps[2]);
}

TEST_CASE("select_random: exhaustive when k equals the bank, deterministic per seed") {
    auto rng_means = make_rng(57, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(4, 3, rng_means));

    auto rng1 = make_rng(9, 1);
    const SampleSelection all = select_random(bank, 4, rng1);
    std::vector<Index> got = all.timestamps;
    std::sort(got.begin(), got.end());
    CHECK(got == bank.timestamps);

    auto rng2 = make_rng(9, 2);
    auto rng3 = make_rng(9, 2);
    CHECK(select_random(bank, 2, rng2).timestamps == select_random(bank, 2, rng3).timestamps);
}

TEST_CASE("select_random draws uniformly (4-sigma binomial bound)") {
    auto rng_means = make_rng(58, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(4, 3, rng_means));
    auto rng = make_rng(58, 1);
    constexpr int kDraws = 10000;
    std::array<int, 4> counts{};
    for (int i = 0; i < kDraws; ++i) {
        const SampleSelection sel = select_random(bank, 1, rng);
        counts[static_cast<std::size_t>(sel.timestamps[0] - bank.timestamps[0])] += 1;
    }
    const double expect = kDraws / 4.0;
    const double sigma = std::sqrt(kDraws * 0.25 * 0.75);
    for (const int c : counts) CHECK(std::abs(c - expect) <= 4.0 * sigma);
}

TEST_CASE("k larger than the bank is an error") {
    auto rng = make_rng(59, 0);
    const EmbeddingBank bank = bank_from_means(testfix::random_matrix(3, 2, rng));
    CHECK_THROWS_AS(select_top_k(bank, testfix::random_matrix(1, 2, rng), 4), Error);
    auto r = make_rng(59, 1);
    CHECK_THROWS_AS(select_random(bank, 4, r), Error);
}
