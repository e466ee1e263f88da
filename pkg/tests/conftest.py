import blowuplab.specfun

# Not a test class despite the name.
blowuplab.specfun.TestFunctionContext.__test__ = False
