#include <doctest.h>

#include "salmap/montage.hpp"

using namespace salmap;

namespace {

RgbImage pixel(float r, float g, float b) {
    RgbImage img(1, 1);
    img.at(0, 0, 0) = r;
    img.at(0, 0, 1) = g;
    img.at(0, 0, 2) = b;
    return img;
}

}  // namespace

TEST_CASE("segment_object multiplies channelwise") {
    const RgbImage img = pixel(0.9f, 0.6f, 0.3f);
    SaliencyMap half(1, 1, 0.5f);
    const SegmentedObject obj = segment_object(img, half);
    CHECK(obj.color.at(0, 0, 0) == doctest::Approx(0.45));
    CHECK(obj.color.at(0, 0, 1) == doctest::Approx(0.3));
    CHECK(obj.color.at(0, 0, 2) == doctest::Approx(0.15));
    CHECK(obj.alpha.at(0, 0) == 0.5f);

    SUBCASE("unit matte is the identity") {
        const SegmentedObject id = segment_object(img, SaliencyMap(1, 1, 1.f));
        CHECK(id.color.data == img.data);
    }
    SUBCASE("zero matte blacks out") {
        const SegmentedObject z = segment_object(img, SaliencyMap(1, 1, 0.f));
        for (const float v : z.color.data) CHECK(v == 0.f);
    }
    SUBCASE("dimensions must match") {
        CHECK_THROWS_AS(segment_object(img, SaliencyMap(2, 1, 1.f)), DimensionMismatch);
    }
}

TEST_CASE("binarized matte is hard") {
    RgbImage img(2, 1);
    img.at(0, 0, 0) = img.at(1, 0, 0) = 0.8f;
    SaliencyMap sal(2, 1);
    sal.data = {0.6f, 0.4f};
    const SegmentedObject obj = segment_object_binarized(img, sal, 0.5);
    CHECK(obj.alpha.data[0] == 1.f);
    CHECK(obj.alpha.data[1] == 0.f);
    CHECK(obj.color.at(0, 0, 0) == 0.8f);
    CHECK(obj.color.at(1, 0, 0) == 0.f);
}

TEST_CASE("recolor applies permutation and gain under the matte") {
    SegmentedObject obj;
    obj.color = pixel(0.8f, 0.5f, 0.2f);
    obj.alpha = SaliencyMap(1, 1, 1.f);

    SUBCASE("identity transform changes nothing") {
        const SegmentedObject out = recolor(obj, ChannelTransform{});
        CHECK(out.color.data == obj.color.data);
    }
    SUBCASE("swapping R and B") {
        ChannelTransform t;
        t.permutation = {2, 1, 0};
        const SegmentedObject out = recolor(obj, t);
        CHECK(out.color.at(0, 0, 0) == doctest::Approx(0.2));
        CHECK(out.color.at(0, 0, 1) == doctest::Approx(0.5));
        CHECK(out.color.at(0, 0, 2) == doctest::Approx(0.8));
    }
    SUBCASE("gain clamps at one") {
        ChannelTransform t;
        t.gains = {2.0, 1.0, 1.0};
        SegmentedObject in;
        in.color = pixel(0.6f, 0.1f, 0.1f);
        in.alpha = SaliencyMap(1, 1, 1.f);
        const SegmentedObject out = recolor(in, t);
        CHECK(out.color.at(0, 0, 0) == 1.f);  // 1.2 clamped
    }
    SUBCASE("zero alpha pixels are untouched") {
        SegmentedObject in;
        in.color = pixel(0.4f, 0.4f, 0.4f);
        in.alpha = SaliencyMap(1, 1, 0.f);
        ChannelTransform t;
        t.gains = {2.0, 2.0, 2.0};
        const SegmentedObject out = recolor(in, t);
        CHECK(out.color.data == in.color.data);
    }
    SUBCASE("invalid gains are rejected") {
        ChannelTransform t;
        t.gains = {2.5, 1.0, 1.0};
        CHECK_THROWS_AS(recolor(obj, t), InvalidParam);
        t.gains = {-0.1, 1.0, 1.0};
        CHECK_THROWS_AS(recolor(obj, t), InvalidParam);
    }
    SUBCASE("invalid permutations are rejected") {
        ChannelTransform t;
        t.permutation = {0, 0, 1};
        CHECK_THROWS_AS(recolor(obj, t), InvalidParam);
    }
}

TEST_CASE("bilinear resize reference cases") {
    SUBCASE("same size is the identity") {
        RgbImage img(3, 2);
        for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = float(i) / 18.f;
        const RgbImage out = resize_bilinear(img, 3, 2);
        CHECK(out.data == img.data);
    }
    SUBCASE("1x1 target samples the corner") {
        RgbImage img(4, 3);
        img.at(0, 0, 0) = 0.7f;
        const RgbImage out = resize_bilinear(img, 1, 1);
        CHECK(out.at(0, 0, 0) == 0.7f);
    }
    SUBCASE("upsampling a two-pixel row interpolates the midpoint") {
        RgbImage img(2, 1);
        img.at(1, 0, 0) = img.at(1, 0, 1) = img.at(1, 0, 2) = 1.f;
        const RgbImage out = resize_bilinear(img, 3, 1);
        CHECK(out.at(0, 0, 0) == doctest::Approx(0.0));
        CHECK(out.at(1, 0, 0) == doctest::Approx(0.5));
        CHECK(out.at(2, 0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("constant images are preserved and bounds never exceeded") {
        const RgbImage flat(5, 4, 0.37f, 0.37f, 0.37f);
        const RgbImage big = resize_bilinear(flat, 13, 9);
        for (const float v : big.data) CHECK(v == doctest::Approx(0.37f));

        RgbImage noisy(6, 5);
        std::uint32_t state = 21;
        for (float& v : noisy.data) {
            state = state * 1664525u + 1013904223u;
            v = float(state >> 8) / float(1 << 24);
        }
        const auto [lo, hi] = std::minmax_element(noisy.data.begin(), noisy.data.end());
        const RgbImage out = resize_bilinear(noisy, 17, 11);
        for (const float v : out.data) {
            CHECK(v >= *lo - 1e-6f);
            CHECK(v <= *hi + 1e-6f);
        }
    }
    SUBCASE("zero target size is rejected") {
        CHECK_THROWS_AS(resize_bilinear(RgbImage(2, 2), 0, 2), InvalidParam);
    }
}

TEST_CASE("composite premultiplied over") {
    RgbImage bg(3, 3, 0.4f, 0.4f, 0.4f);
    SegmentedObject obj;
    obj.color = pixel(0.3f, 0.3f, 0.3f);
    obj.alpha = SaliencyMap(1, 1, 0.5f);
    const RgbImage out = composite(bg, obj, 1, 1);
    CHECK(out.at(1, 1, 0) == doctest::Approx(0.3 + 0.5 * 0.4));
    CHECK(out.at(0, 0, 0) == 0.4f);  // outside the window

    SUBCASE("zero alpha leaves the background") {
        obj.alpha = SaliencyMap(1, 1, 0.f);
        obj.color = pixel(0.f, 0.f, 0.f);
        const RgbImage same = composite(bg, obj, 1, 1);
        CHECK(same.data == bg.data);
    }
    SUBCASE("unit alpha replaces the window") {
        obj.alpha = SaliencyMap(1, 1, 1.f);
        obj.color = pixel(0.9f, 0.1f, 0.2f);
        const RgbImage rep = composite(bg, obj, 2, 2);
        CHECK(rep.at(2, 2, 0) == 0.9f);
        CHECK(rep.at(2, 2, 1) == 0.1f);
    }
    SUBCASE("partial overlap clips") {
        obj.alpha = SaliencyMap(1, 1, 1.f);
        obj.color = pixel(1.f, 1.f, 1.f);
        const RgbImage clipped = composite(bg, obj, -0, 2);
        CHECK(clipped.at(0, 2, 0) == 1.f);
    }
    SUBCASE("fully outside placement is an error") {
        CHECK_THROWS_AS(composite(bg, obj, 5, 5), InvalidParam);
        CHECK_THROWS_AS(composite(bg, obj, -3, 0), InvalidParam);
    }
    SUBCASE("output stays in range for premultiplied inputs") {
        SegmentedObject big;
        big.color = RgbImage(2, 2, 0.6f, 0.6f, 0.6f);
        big.alpha = SaliencyMap(2, 2, 0.6f);
        const RgbImage out2 = composite(bg, big, 0, 0);
        for (const float v : out2.data) {
            CHECK(v >= 0.f);
            CHECK(v <= 1.f);
        }
    }
}
