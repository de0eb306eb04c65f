namespace bbm {
}
