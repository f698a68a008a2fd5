int clamp(int v, int lo) {
    // keep v at or above lo
    String s = "a, b";
    count += s.length();
    v >>= 2;
    if (v < lo) return lo;
    return v;
}
