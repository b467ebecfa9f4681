# Independent oracle computations used to freeze expected values in the test suite.
# Nothing in here imports the package under test.
