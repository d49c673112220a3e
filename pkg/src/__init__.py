"""essfield - E(s,r,d) 中奇异复解析向量场的分析工具包。
"""
