#include <catch_amalgamated.hpp>

#include "linform/errors.hpp"
#include "linform/model.hpp"

#include <array>
#include <set>

using namespace linform;

namespace {

ModelSpec make(const std::vector<std::array<long, 4>>& rows) {
    std::vector<ExactComponent> comps;
    for (const auto& r : rows) comps.push_back({Rational(r[0]), Rational(r[1]), Rational(r[2]), Rational(r[3])});
    return ModelSpec::from_exact(comps);
}

}  // namespace

TEST_CASE("lexicographic enumeration of sign sequences") {
    const auto two = enumerate_sign_sequences(2);
    REQUIRE(two.size() == 4);
    CHECK(two[0].signs() == std::vector<int>{-1, -1});
    CHECK(two[1].signs() == std::vector<int>{-1, 1});
    CHECK(two[2].signs() == std::vector<int>{1, -1});
    CHECK(two[3].signs() == std::vector<int>{1, 1});

    const auto one = enumerate_sign_sequences(1);
    REQUIRE(one.size() == 2);
    CHECK(one[0].signs() == std::vector<int>{-1});
    CHECK(one[1].signs() == std::vector<int>{1});

    const auto three = enumerate_sign_sequences(3);
    REQUIRE(three.size() == 8);
    CHECK(three[0].signs() == std::vector<int>{-1, -1, -1});
}

TEST_CASE("enumeration is a bijection and index inverts from_index") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto seqs = enumerate_sign_sequences(n);
        std::set<std::vector<int>> seen;
        std::size_t adjacent = 0;
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            CHECK(seqs[i].index() == i);
            CHECK(SignSeq::from_index(static_cast<std::uint32_t>(i), n) == seqs[i]);
            seen.insert(seqs[i].signs());
            for (std::size_t j = i + 1; j < seqs.size(); ++j) adjacent += hamming_distance(seqs[i], seqs[j]) == 1;
        }
        CHECK(seen.size() == (std::size_t{1} << n));
        CHECK(adjacent == n * (std::size_t{1} << (n - 1)));
    }
}

TEST_CASE("enumeration respects the cap") {
    CHECK_THROWS_AS(enumerate_sign_sequences(9), Error);
    CHECK(enumerate_sign_sequences(9, 9).size() == 512);
    CHECK_THROWS_AS(enumerate_sign_sequences(0), Error);
}

TEST_CASE("hamming distance") {
    CHECK(hamming_distance(SignSeq({-1, -1}), SignSeq({-1, 1})) == 1);
    CHECK(hamming_distance(SignSeq({1, -1}), SignSeq({1, -1})) == 0);
    CHECK(hamming_distance(SignSeq({-1, -1, -1}), SignSeq({1, 1, 1})) == 3);
    CHECK_THROWS_AS(hamming_distance(SignSeq({1}), SignSeq({1, 1})), Error);
}

TEST_CASE("sigma speeds") {
    const auto spec = make({{1, 3, 0, 1}, {2, 5, 0, 1}});
    CHECK(sigma_speed_exact(spec, SignSeq({1, 1})) == 8);
    CHECK(sigma_speed_exact(spec, SignSeq({-1, 1})) == 2);
    CHECK(sigma_speed(spec, SignSeq({-1, 1})) == -(3.0 - 5.0));
    const auto anti = make({{1, 2, 0, 1}, {1, 2, 0, -1}});
    CHECK(sigma_speed_exact(anti, SignSeq({1, 1})) == 0);
}

TEST_CASE("total rate and support speed") {
    CHECK(lambda_total_exact(make({{1, 1, 0, 1}, {1, 1, 0, 1}})) == 2);
    CHECK(lambda_total(make({{2, 1, 0, 1}, {3, 1, 0, 1}, {5, 1, 0, 1}})) == 10.0);
    CHECK(lambda_total(make({{7, 1, 0, 1}})) == 7.0);
    CHECK(support_speed(make({{1, 3, 0, 2}, {1, 5, 0, -1}})) == 11.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(make({{0, 1, 0, 1}}), Error);
    CHECK_THROWS_AS(make({{1, -1, 0, 1}}), Error);
    CHECK_THROWS_AS(make({{1, 1, 0, 0}}), Error);
    CHECK_THROWS_AS(ModelSpec::from_doubles({{1.0, 1.0, 0.0}}, {1.0, 2.0}), Error);
    const auto spec = ModelSpec::from_doubles({{1.0, 2.0, 0.5}, {1.0, 1.0, -1.0}}, {1.0, -1.0});
    CHECK_FALSE(spec.exact_mode());
    CHECK(spec.center() == 1.5);
    CHECK(make({{1, 1, 3, 2}}).center_exact() == 6);
}
