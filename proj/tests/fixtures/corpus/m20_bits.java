int hashMix(int h, final int seed) {
    h ^= seed;
    h = h * 0x5bd1e995 + (h << 13);
    h ^= h >>> 15;
    int mask = ~0 & (h | 1);
    return (h & 0xFF) != 0 ? h : mask;
}
