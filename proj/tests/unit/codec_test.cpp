#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <string>

#include "support/generators.hpp"
#include "xai/codec.hpp"

namespace xai {
namespace {

Bytes read_fixture(const std::string& name) {
  std::ifstream in(std::string(XAI_FIXTURES_DIR) + "/images/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an xai::Error";
  return ErrorCode::kArgument;
}

TEST(MaskCodec, RoundTripsSmallMask) {
  const Mask m(2, 2, {1, 0, 0, 1});
  EXPECT_EQ(decode_mask(encode_mask(m)), m);
}

TEST(MaskCodec, RoundTripsRandomMasks) {
  testing::Rng rng(42);
  for (int i = 0; i < 60; ++i) {
    const Mask m = testing::random_mask(rng, testing::uniform_int(rng, 1, 50),
                                        testing::uniform_int(rng, 1, 50),
                                        testing::uniform_real(rng, 0.0, 1.0));
    ASSERT_EQ(decode_mask(encode_mask(m)), m);
  }
}

TEST(MaskCodec, EncodingIsDeterministic) {
  testing::Rng rng(1);
  const Mask m = testing::random_mask(rng, 31, 17);
  EXPECT_EQ(encode_mask(m), encode_mask(m));
}

TEST(MaskCodec, DecodesForeignSingleChannelPng) {
  const Mask m = decode_mask(read_fixture("mask_3x2.png"));
  EXPECT_EQ(m, Mask(3, 2, {0, 1, 0, 0, 0, 1}));
}

TEST(MaskCodec, AcceptsBinaryPgm) {
  const Bytes pgm = bytes_of(std::string("P5\n2 1\n255\n") + '\xff' + '\0');
  EXPECT_EQ(decode_mask(pgm), Mask(2, 1, {1, 0}));
}

TEST(MaskCodec, RejectsEmptyAndGarbage) {
  EXPECT_EQ(code_of([] { decode_mask(Bytes{}); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { decode_mask(bytes_of("not an image at all")); }), ErrorCode::kParse);
  Bytes truncated = encode_mask(Mask(8, 8));
  truncated.resize(truncated.size() / 2);
  EXPECT_EQ(code_of([&] { decode_mask(truncated); }), ErrorCode::kParse);
}

TEST(MaskCodec, RejectsNonBinaryValues) {
  EXPECT_EQ(code_of([] { decode_mask(read_fixture("gray_128.png")); }),
            ErrorCode::kInvalidMask);
}

TEST(MaskCodec, RejectsMultiChannelRaster) {
  EXPECT_EQ(code_of([] { decode_mask(encode_png(ImageBuffer(2, 2))); }), ErrorCode::kParse);
}

TEST(DecodeImage, ReadsRgbPixel) {
  const ImageBuffer img = decode_image(encode_png(ImageBuffer(1, 1, Rgb{10, 20, 30})));
  EXPECT_EQ(img, ImageBuffer(1, 1, Rgb{10, 20, 30}));
}

TEST(DecodeImage, ReadsPortablePixmap) {
  const Bytes ppm = bytes_of(std::string("P6\n1 1\n255\n") + '\x0a' + '\x14' + '\x1e');
  EXPECT_EQ(decode_image(ppm), ImageBuffer(1, 1, Rgb{10, 20, 30}));
}

TEST(DecodeImage, CompositesAlphaOverWhite) {
  EXPECT_EQ(decode_image(read_fixture("rgba_transparent.png")).at(0, 0), (Rgb{255, 255, 255}));
  // round((c * 128 + 255 * 127) / 255) for c = 200, 100, 0
  EXPECT_EQ(decode_image(read_fixture("rgba_half.png")).at(0, 0), (Rgb{227, 177, 127}));
  EXPECT_EQ(decode_image(read_fixture("gray_alpha_opaque.png")).at(0, 0), (Rgb{50, 50, 50}));
}

TEST(DecodeImage, ReadsJpeg) {
  const ImageBuffer img = decode_image(read_fixture("rgb_2x1.jpg"));
  EXPECT_EQ(img.width(), 2);
  EXPECT_EQ(img.height(), 1);
  EXPECT_NEAR(img.at(0, 0).r, 10, 3);
  EXPECT_NEAR(img.at(1, 0).b, 30, 3);
}

TEST(DecodeImage, RejectsTruncatedStream) {
  Bytes png = encode_png(ImageBuffer(16, 16, Rgb{1, 2, 3}));
  png.resize(20);
  EXPECT_EQ(code_of([&] { decode_image(png); }), ErrorCode::kDecode);
  EXPECT_EQ(code_of([] { decode_image(Bytes{}); }), ErrorCode::kDecode);
}

TEST(DecodeImage, PngRoundTripIsLossless) {
  testing::Rng rng(11);
  const ImageBuffer img = testing::random_image(rng, 13, 7);
  EXPECT_EQ(decode_image(encode_png(img)), img);
}

TEST(SniffMimeType, RecognizesCommonContainers) {
  EXPECT_STREQ(sniff_mime_type(encode_png(ImageBuffer(1, 1))), "image/png");
  EXPECT_STREQ(sniff_mime_type(read_fixture("rgb_2x1.jpg")), "image/jpeg");
  EXPECT_STREQ(sniff_mime_type(bytes_of("xyz")), "application/octet-stream");
}

}  // namespace
}  // namespace xai
