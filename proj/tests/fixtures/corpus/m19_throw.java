@Override
public void setCapacity(int newCapacity) {
    if (newCapacity < 0) {
        throw new IllegalArgumentException("capacity must be >= 0: " + newCapacity);
    }
    assert newCapacity >= size;
    capacity = newCapacity;
}
