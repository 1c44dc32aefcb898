#pragma once

namespace cmlog {

// 50-digit decimal references for the constants the engine depends on,
// generated and cross-checked pre-build with an independent
// multiprecision oracle (mpmath 1.3, dps=60) against published values.
// Index 0 of kZetaDigits holds the order-2 value.
inline constexpr const char* kGammaDigits =
    "0.57721566490153286060651209008240243104215933593992";
inline constexpr const char* kPiDigits =
    "3.1415926535897932384626433832795028841971693993751";
inline constexpr const char* kZetaDigits[] = {
    "1.6449340668482264364724151666460251892189499012068",
    "1.2020569031595942853997381615114499907649862923405",
    "1.0823232337111381915160036965411679027747509519187",
    "1.0369277551433699263313654864570341680570809195019",
    "1.0173430619844491397145179297909205279018174900329",
    "1.0083492773819228268397975498497967595998635605652",
    "1.0040773561979443393786852385086524652589607906499",
    "1.0020083928260822144178527692324120604856058513949",
    "1.0009945751278180853371459589003190170060195315645",
};
inline constexpr unsigned kZetaMax = 10;  // kZetaDigits covers orders 2..10

}  // namespace cmlog
